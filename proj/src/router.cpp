#include "emesh/router.hpp"

namespace emesh {

const char* direction_name(Direction d) {
    switch (d) {
        case Direction::North: return "north";
        case Direction::East: return "east";
        case Direction::South: return "south";
        case Direction::West: return "west";
        case Direction::Hub: return "hub";
    }
    return "?";
}

} // namespace emesh
