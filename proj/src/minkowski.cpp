#include "reldiff/minkowski.hpp"

#include <algorithm>
#include <stdexcept>

namespace reldiff {

int epsilon4(int a, int b, int c, int d) {
    const int idx[4] = {a, b, c, d};
    int sign = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            if (idx[i] == idx[j]) return 0;
            if (idx[i] > idx[j]) sign = -sign;
        }
    return sign;
}

FourVector lorentz_force(const AntisymTensor& F, const FourVector& p) {
    const auto& e = F.e;
    const auto& b = F.b;
    const double p0 = p.c[0];
    const std::array<double, 3> pv{p.c[1], p.c[2], p.c[3]};
    FourVector f;
    f.c[0] = e[0] * pv[0] + e[1] * pv[1] + e[2] * pv[2];
    f.c[1] = e[0] * p0 + (pv[1] * b[2] - pv[2] * b[1]);
    f.c[2] = e[1] * p0 + (pv[2] * b[0] - pv[0] * b[2]);
    f.c[3] = e[2] * p0 + (pv[0] * b[1] - pv[1] * b[0]);
    return f;
}

Mat4 Mat4::identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r.at(i, i) = 1.0;
    return r;
}

FourVector Mat4::apply(const FourVector& v) const {
    FourVector r;
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += at(i, j) * v.c[static_cast<std::size_t>(j)];
        r.c[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

Mat4 Mat4::operator*(const Mat4& o) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += at(i, k) * o.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

Mat4 Mat4::operator*(double s) const {
    Mat4 r;
    for (std::size_t i = 0; i < 16; ++i) r.m[i] = m[i] * s;
    return r;
}

Mat4 Mat4::operator+(const Mat4& o) const {
    Mat4 r;
    for (std::size_t i = 0; i < 16; ++i) r.m[i] = m[i] + o.m[i];
    return r;
}

Mat4 mixed_matrix(const AntisymTensor& F) {
    const auto& e = F.e;
    const auto& b = F.b;
    Mat4 A;
    A.at(0, 1) = e[0];
    A.at(0, 2) = e[1];
    A.at(0, 3) = e[2];
    A.at(1, 0) = e[0];
    A.at(2, 0) = e[1];
    A.at(3, 0) = e[2];
    A.at(1, 2) = b[2];
    A.at(2, 1) = -b[2];
    A.at(1, 3) = -b[1];
    A.at(3, 1) = b[1];
    A.at(2, 3) = b[0];
    A.at(3, 2) = -b[0];
    return A;
}

FourVector boost(const std::array<double, 3>& v, const FourVector& a) {
    const double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    if (v2 >= 1.0) throw std::domain_error("boost velocity must satisfy |v| < c");
    if (v2 < 1e-300) return a;
    const double gamma = 1.0 / std::sqrt(1.0 - v2);
    const std::array<double, 3> av{a.c[1], a.c[2], a.c[3]};
    const double va = v[0] * av[0] + v[1] * av[1] + v[2] * av[2];
    FourVector r;
    r.c[0] = gamma * (a.c[0] - va);
    const double coef = (gamma - 1.0) * va / v2 - gamma * a.c[0];
    for (int i = 0; i < 3; ++i) r.c[static_cast<std::size_t>(i + 1)] = av[static_cast<std::size_t>(i)] + coef * v[static_cast<std::size_t>(i)];
    return r;
}

Mat4 boost_matrix(const std::array<double, 3>& v) {
    Mat4 L;
    FourVector e0 = boost(v, {1, 0, 0, 0});
    FourVector e1 = boost(v, {0, 1, 0, 0});
    FourVector e2 = boost(v, {0, 0, 1, 0});
    FourVector e3 = boost(v, {0, 0, 0, 1});
    const FourVector cols[4] = {e0, e1, e2, e3};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) L.at(i, j) = cols[j].c[static_cast<std::size_t>(i)];
    return L;
}

Mat4 expm(const Mat4& A) {
    double norm = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += std::abs(A.at(i, j));
        norm = std::max(norm, row);
    }
    // scale so the degree-6 series truncation sits far below 1e-12
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.01 && squarings < 60) {
        scale *= 0.5;
        ++squarings;
    }
    const Mat4 B = A * scale;
    Mat4 term = Mat4::identity();
    Mat4 sum = term;
    for (int k = 1; k <= 6; ++k) {
        term = term * B * (1.0 / k);
        sum = sum + term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

}  // namespace reldiff
