#include "reldiff/dynamics.hpp"

#include <ostream>

namespace reldiff {

void Trajectory::write_csv(std::ostream& os) const {
    os << "s,x0,x1,x2,x3,p0,p1,p2,p3\n";
    os.precision(17);
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << s[i];
        for (int j = 0; j < 4; ++j) os << "," << points[i].x.c[static_cast<std::size_t>(j)];
        for (int j = 0; j < 4; ++j) os << "," << points[i].p.c[static_cast<std::size_t>(j)];
        os << "\n";
    }
}

}  // namespace reldiff
