#include <stdexcept>
#include <vector>

#include "fsi/fem.hpp"

namespace fsi {

namespace {

std::vector<QuadraturePoint> centroid_rule() { return {{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.5}}; }

std::vector<QuadraturePoint> three_point_rule() {
    // Degree 2, interior points.
    const double a = 2.0 / 3, b = 1.0 / 6, w = 1.0 / 6;
    return {{a, b, b, w}, {b, a, b, w}, {b, b, a, w}};
}

void push_symmetric(std::vector<QuadraturePoint>& pts, double a, double w) {
    const double b = 1.0 - 2.0 * a;
    pts.push_back({b, a, a, w});
    pts.push_back({a, b, a, w});
    pts.push_back({a, a, b, w});
}

void push_full_orbit(std::vector<QuadraturePoint>& pts, double a, double b, double w) {
    const double c = 1.0 - a - b;
    pts.push_back({a, b, c, w});
    pts.push_back({a, c, b, w});
    pts.push_back({b, a, c, w});
    pts.push_back({b, c, a, w});
    pts.push_back({c, a, b, w});
    pts.push_back({c, b, a, w});
}

std::vector<QuadraturePoint> dunavant4() {
    std::vector<QuadraturePoint> pts;
    push_symmetric(pts, 0.445948490915965, 0.223381589678011 / 2);
    push_symmetric(pts, 0.091576213509771, 0.109951743655322 / 2);
    return pts;
}

std::vector<QuadraturePoint> dunavant6() {
    std::vector<QuadraturePoint> pts;
    push_symmetric(pts, 0.063089014491502, 0.050844906370207 / 2);
    push_symmetric(pts, 0.249286745170910, 0.116786275726379 / 2);
    push_full_orbit(pts, 0.053145049844817, 0.310352451033784, 0.082851075618374 / 2);
    return pts;
}

}  // namespace

const std::vector<QuadraturePoint>& quadrature_rule(int order) {
    static const std::vector<QuadraturePoint> r1 = centroid_rule();
    static const std::vector<QuadraturePoint> r2 = three_point_rule();
    static const std::vector<QuadraturePoint> r4 = dunavant4();
    static const std::vector<QuadraturePoint> r6 = dunavant6();
    switch (order) {
        case 1: return r1;
        case 2: return r2;
        case 3:
        case 4: return r4;
        case 5:
        case 6: return r6;
        default: throw std::invalid_argument("quadrature_rule: order must be in [1, 6]");
    }
}

}  // namespace fsi
