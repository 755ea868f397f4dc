#include "crashvol/sim/paths.hpp"

namespace crashvol::sim {

std::vector<double> PathMatrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = data_[r * cols_ + c];
    return out;
}

}  // namespace crashvol::sim
