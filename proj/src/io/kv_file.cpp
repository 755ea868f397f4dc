#include "crashvol/io/kv_file.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "crashvol/error.hpp"
#include "crashvol/io/csv.hpp"

namespace crashvol::io {

KeyValueFile KeyValueFile::parse(std::string_view text, std::string_view source) {
    KeyValueFile file;
    file.source_ = std::string(source);
    std::size_t line_no = 0;
    for (auto raw : split_lines(text)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::Parse,
                        fmt::format("{}:{}: expected 'key = value'", source, line_no));
        }
        auto key = std::string(trim(line.substr(0, eq)));
        auto value = std::string(trim(line.substr(eq + 1)));
        if (key.empty()) {
            throw Error(ErrorCode::Parse, fmt::format("{}:{}: empty key", source, line_no));
        }
        if (file.contains(key)) {
            throw Error(ErrorCode::Parse,
                        fmt::format("{}:{}: duplicate key '{}'", source, line_no, key));
        }
        file.entries_.emplace_back(std::move(key), std::move(value));
    }
    return file;
}

KeyValueFile KeyValueFile::read(const std::filesystem::path& path) {
    return parse(read_text_file(path), path.string());
}

void KeyValueFile::set(std::string key, std::string value) {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const auto& kv) { return kv.first == key; });
    if (it != entries_.end()) {
        it->second = std::move(value);
    } else {
        entries_.emplace_back(std::move(key), std::move(value));
    }
}

void KeyValueFile::set(std::string key, double value) {
    set(std::move(key), format_roundtrip(value));
}

bool KeyValueFile::contains(std::string_view key) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& kv) { return kv.first == key; });
}

std::optional<std::string> KeyValueFile::get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string KeyValueFile::require(std::string_view key) const {
    auto value = get(key);
    if (!value) {
        throw Error(ErrorCode::Parse, fmt::format("{}: missing key '{}'", source_, key));
    }
    return *value;
}

double KeyValueFile::require_double(std::string_view key) const {
    return parse_double(require(key), fmt::format("{}: key '{}'", source_, key));
}

double KeyValueFile::get_double(std::string_view key, double fallback) const {
    auto value = get(key);
    return value ? parse_double(*value, fmt::format("{}: key '{}'", source_, key)) : fallback;
}

long long KeyValueFile::require_integer(std::string_view key) const {
    return parse_integer(require(key), fmt::format("{}: key '{}'", source_, key));
}

std::string KeyValueFile::to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

void KeyValueFile::write(const std::filesystem::path& path) const {
    write_text_file(path, to_string());
}

}  // namespace crashvol::io
