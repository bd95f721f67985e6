#include "emesh/node.hpp"

#include <stdexcept>

namespace emesh {

int bank_of(uint32_t offset) {
    if (offset >= Scratchpad::kCapacity)
        throw std::out_of_range("bank_of: offset beyond the 64KB scratchpad");
    return int((offset >> 3) & 3);
}

} // namespace emesh
