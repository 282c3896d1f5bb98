#include "heis/connection.hpp"

#include <algorithm>
#include <cmath>

namespace heis {

std::string_view to_string(ConnectionKind kind) noexcept {
    switch (kind) {
        case ConnectionKind::LeviCivita: return "levi-civita";
        case ConnectionKind::SvK1: return "svk1";
        case ConnectionKind::SvK2: return "svk2";
        case ConnectionKind::Adapted: return "adapted";
    }
    return "?";
}

std::optional<ConnectionKind> kind_from_string(std::string_view name) noexcept {
    for (auto k : kAllKinds)
        if (to_string(k) == name) return k;
    if (name == "lc" || name == "levicivita") return ConnectionKind::LeviCivita;
    return std::nullopt;
}

CoeffTable CoeffPoly::at(double L) const {
    CoeffTable t;
    t.kind = kind;
    t.L = L;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) t.gamma[i][j] = constant[i][j] + L * slope[i][j];
    return t;
}

CoeffPoly coeff_poly(ConnectionKind kind) {
    CoeffPoly p;
    p.kind = kind;
    auto& c = p.constant;
    auto& s = p.slope;
    switch (kind) {
        case ConnectionKind::LeviCivita:
            c[0][1] = {0, 0, 0.5};
            c[1][0] = {0, 0, -0.5};
            s[0][2] = {0, -0.5, 0};
            s[2][0] = {0, -0.5, 0};
            s[1][2] = {0.5, 0, 0};
            s[2][1] = {0.5, 0, 0};
            break;
        case ConnectionKind::SvK1:
            s[2][0] = {0, -0.5, 0};
            s[2][1] = {0.5, 0, 0};
            break;
        case ConnectionKind::SvK2:
            c[0][1] = {0, 0, 0.5};
            s[0][2] = {0, -0.5, 0};
            break;
        case ConnectionKind::Adapted:
            break;
    }
    return p;
}

CoeffTable coeff_table(ConnectionKind kind, double L) { return coeff_poly(kind).at(L); }

FrameVector bracket(std::size_t i, std::size_t j) noexcept {
    if (i == 0 && j == 1) return {0, 0, 1};
    if (i == 1 && j == 0) return {0, 0, -1};
    return {};
}

FrameVector covariant(const CoeffTable& table, const FrameVector& direction, const FrameVector& field,
                      const FrameVector& field_derivative) noexcept {
    FrameVector out = field_derivative;
    for (std::size_t i = 0; i < 3; ++i) {
        if (direction[i] == 0.0) continue;
        for (std::size_t j = 0; j < 3; ++j) out = out + (direction[i] * field[j]) * table(i, j);
    }
    return out;
}

FrameVector covariant_acceleration(const CoeffTable& table, const CurveJet& c) noexcept {
    const FrameVelocity fv = frame_velocity(c);
    return covariant(table, fv.value, fv.value, fv.rate);
}

namespace {

// nabla_{X_i} of a constant-coefficient field W = W^m X_m.
FrameVector nabla_constant(const CoeffTable& t, std::size_t i, const FrameVector& w) noexcept {
    FrameVector out;
    for (std::size_t m = 0; m < 3; ++m) out = out + w[m] * t(i, m);
    return out;
}

}  // namespace

FrameVector curvature_tensor(const CoeffTable& t, std::size_t i, std::size_t j, std::size_t k) noexcept {
    const FrameVector ij = bracket(i, j);
    FrameVector out = nabla_constant(t, i, t(j, k)) - nabla_constant(t, j, t(i, k));
    for (std::size_t m = 0; m < 3; ++m)
        if (ij[m] != 0.0) out = out - ij[m] * t(m, k);
    return out;
}

CurvatureArray curvature_array(const CoeffTable& table) noexcept {
    CurvatureArray R{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) R[i][j][k] = curvature_tensor(table, i, j, k);
    return R;
}

double sectional(const CurvatureArray& R, double L, const FrameVector& e1, const FrameVector& e2) noexcept {
    FrameVector r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double w = e1[i] * e2[j];
            if (w == 0.0) continue;
            for (std::size_t k = 0; k < 3; ++k) r = r + (w * e1[k]) * R[i][j][k];
        }
    return -inner_L(L, r, e2);
}

double sectional(const CoeffTable& table, const FrameVector& e1, const FrameVector& e2) noexcept {
    return sectional(curvature_array(table), table.L, e1, e2);
}

FrameVector torsion(const CoeffTable& t, std::size_t i, std::size_t j) noexcept {
    return t(i, j) - t(j, i) - bracket(i, j);
}

double metric_defect(const CoeffTable& t) noexcept {
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) {
                FrameVector xj, xk;
                xj[j] = 1.0;
                xk[k] = 1.0;
                const double d = inner_L(t.L, t(i, j), xk) + inner_L(t.L, xj, t(i, k));
                worst = std::max(worst, std::abs(d));
            }
    return worst;
}

}  // namespace heis
