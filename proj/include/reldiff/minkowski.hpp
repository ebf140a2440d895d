#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

// Minkowski tensor algebra with metric signature (+,-,-,-).
// Four-vectors store upper (contravariant) components; lowering an index
// flips the sign of the spatial entries. Velocities are in units of c.

namespace reldiff {

inline constexpr std::array<double, 4> kMetricDiag{1.0, -1.0, -1.0, -1.0};

struct FourVector {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    FourVector() = default;
    FourVector(double c0, double c1, double c2, double c3) : c{c0, c1, c2, c3} {}

    double& operator[](std::size_t i) { return c[i]; }
    double operator[](std::size_t i) const { return c[i]; }

    double time() const { return c[0]; }
    std::array<double, 3> spatial() const { return {c[1], c[2], c[3]}; }

    FourVector operator+(const FourVector& o) const {
        return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2], c[3] + o.c[3]};
    }
    FourVector operator-(const FourVector& o) const {
        return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]};
    }
    FourVector operator*(double s) const { return {c[0] * s, c[1] * s, c[2] * s, c[3] * s}; }
    FourVector& operator+=(const FourVector& o) {
        for (int i = 0; i < 4; ++i) c[i] += o.c[i];
        return *this;
    }

    // component with the index lowered
    double lower(std::size_t mu) const { return kMetricDiag[mu] * c[mu]; }
};

inline FourVector operator*(double s, const FourVector& v) { return v * s; }

inline double minkowski_dot(const FourVector& a, const FourVector& b) {
    return a.c[0] * b.c[0] - a.c[1] * b.c[1] - a.c[2] * b.c[2] - a.c[3] * b.c[3];
}

// Antisymmetric rank-2 tensor F_{mu nu} packed into the six independent
// lower-index components
//   e_j = F_{0j},   b_1 = F_{32}, b_2 = F_{13}, b_3 = F_{21},
// i.e. F_{jk} = -epsilon_{jkl} b_l. This packing is fixed project-wide.
struct AntisymTensor {
    std::array<double, 3> e{0.0, 0.0, 0.0};
    std::array<double, 3> b{0.0, 0.0, 0.0};

    static AntisymTensor zero() { return {}; }

    AntisymTensor operator+(const AntisymTensor& o) const {
        AntisymTensor r;
        for (int i = 0; i < 3; ++i) {
            r.e[i] = e[i] + o.e[i];
            r.b[i] = b[i] + o.b[i];
        }
        return r;
    }
    AntisymTensor operator*(double s) const {
        AntisymTensor r;
        for (int i = 0; i < 3; ++i) {
            r.e[i] = e[i] * s;
            r.b[i] = b[i] * s;
        }
        return r;
    }

    double component(std::size_t idx) const { return idx < 3 ? e[idx] : b[idx - 3]; }
    double& component(std::size_t idx) { return idx < 3 ? e[idx] : b[idx - 3]; }

    // F_{mu nu} with both indices lower
    double lower(std::size_t mu, std::size_t nu) const;
};

struct ComplexAntisymTensor {
    std::array<std::complex<double>, 3> e{};
    std::array<std::complex<double>, 3> b{};

    std::complex<double> component(std::size_t idx) const {
        return idx < 3 ? e[idx] : b[idx - 3];
    }
    std::complex<double>& component(std::size_t idx) {
        return idx < 3 ? e[idx] : b[idx - 3];
    }
    std::complex<double> lower(std::size_t mu, std::size_t nu) const;

    AntisymTensor real() const {
        AntisymTensor r;
        for (int i = 0; i < 3; ++i) {
            r.e[i] = e[i].real();
            r.b[i] = b[i].real();
        }
        return r;
    }
};

// index pairs backing the six-component (e,b) basis, in storage order
inline constexpr std::array<std::array<int, 2>, 6> kPairIndex{{
    {{0, 1}}, {{0, 2}}, {{0, 3}}, {{3, 2}}, {{1, 3}}, {{2, 1}},
}};

namespace detail {
// maps (mu,nu) -> (component slot, sign); slot < 0 on the diagonal
struct PairSlot {
    int slot;
    int sign;
};
constexpr std::array<std::array<PairSlot, 4>, 4> make_pair_table() {
    std::array<std::array<PairSlot, 4>, 4> t{};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) t[mu][nu] = {-1, 0};
    for (int a = 0; a < 6; ++a) {
        const int mu = kPairIndex[a][0], nu = kPairIndex[a][1];
        t[mu][nu] = {a, 1};
        t[nu][mu] = {a, -1};
    }
    return t;
}
inline constexpr auto kPairTable = make_pair_table();
}  // namespace detail

inline double AntisymTensor::lower(std::size_t mu, std::size_t nu) const {
    const auto s = detail::kPairTable[mu][nu];
    return s.slot < 0 ? 0.0 : s.sign * component(static_cast<std::size_t>(s.slot));
}

inline std::complex<double> ComplexAntisymTensor::lower(std::size_t mu, std::size_t nu) const {
    const auto s = detail::kPairTable[mu][nu];
    if (s.slot < 0) return {0.0, 0.0};
    return double(s.sign) * component(static_cast<std::size_t>(s.slot));
}

// totally antisymmetric symbol, epsilon(0,1,2,3) = +1
int epsilon4(int a, int b, int c, int d);

// the covector F_{mu nu} p^nu raised back to a four-vector; equals the
// mixed-index matrix F^mu_nu applied to p and is Minkowski-orthogonal to p
FourVector lorentz_force(const AntisymTensor& F, const FourVector& p);

// pure Lorentz boost with velocity v (units of c, |v| < 1); throws
// std::domain_error otherwise
FourVector boost(const std::array<double, 3>& v, const FourVector& a);

// dense 4x4 matrix acting on upper four-vector components
struct Mat4 {
    std::array<double, 16> m{};

    static Mat4 identity();
    double& at(int r, int c) { return m[static_cast<std::size_t>(4 * r + c)]; }
    double at(int r, int c) const { return m[static_cast<std::size_t>(4 * r + c)]; }

    FourVector apply(const FourVector& v) const;
    Mat4 operator*(const Mat4& o) const;
    Mat4 operator*(double s) const;
    Mat4 operator+(const Mat4& o) const;
};

// mixed-index matrix F^mu_nu of the field tensor
Mat4 mixed_matrix(const AntisymTensor& F);

// boost as a matrix on upper components (|v| < 1)
Mat4 boost_matrix(const std::array<double, 3>& v);

// matrix exponential by scaling-and-squaring with a degree-6 Taylor series;
// relative truncation error below 1e-12 for any input
Mat4 expm(const Mat4& A);

}  // namespace reldiff
