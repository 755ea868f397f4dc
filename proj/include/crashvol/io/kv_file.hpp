#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crashvol::io {

/**
 * @brief Flat `key = value` text document.
 *
 * Blank lines and lines starting with '#' are ignored. Keys are unique;
 * insertion order is preserved on output so written files are stable.
 */
class KeyValueFile {
public:
    static KeyValueFile parse(std::string_view text, std::string_view source = "<text>");
    static KeyValueFile read(const std::filesystem::path& path);

    void set(std::string key, std::string value);
    void set(std::string key, double value);  // round-trip formatting

    [[nodiscard]] bool contains(std::string_view key) const;
    [[nodiscard]] std::optional<std::string> get(std::string_view key) const;
    [[nodiscard]] std::string require(std::string_view key) const;
    [[nodiscard]] double require_double(std::string_view key) const;
    [[nodiscard]] double get_double(std::string_view key, double fallback) const;
    [[nodiscard]] long long require_integer(std::string_view key) const;

    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& entries() const noexcept {
        return entries_;
    }

    [[nodiscard]] std::string to_string() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::string source_ = "<text>";
};

}  // namespace crashvol::io
