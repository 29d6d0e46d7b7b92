#ifndef PTXSIM_GEOMETRY_HPP
#define PTXSIM_GEOMETRY_HPP

#include <cmath>
#include <cstdint>

namespace ptxsim {

using NodeId = std::uint32_t;

struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Position& a, const Position& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// Axis-aligned rectangle, inclusive bounds.
struct RegionRect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    bool contains(const Position& p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
};

}  // namespace ptxsim

#endif
