#pragma once
// The four metric connections on the Heisenberg group, given by their
// coefficient tables in the left-invariant frame:
//
//   LeviCivita  the Levi-Civita connection of g_L
//   SvK1        Schouten-Van Kampen connection for the splitting H + span{X3}
//   SvK2        Schouten-Van Kampen connection for span{X2,X3} + span{X1}
//   Adapted     the flat connection with all frame covariant derivatives zero
//
// Table entry [i][j] holds the frame components of nabla_{X_i} X_j.

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "heis/group.hpp"

namespace heis {

enum class ConnectionKind { LeviCivita, SvK1, SvK2, Adapted };

inline constexpr std::array<ConnectionKind, 4> kAllKinds{
    ConnectionKind::LeviCivita, ConnectionKind::SvK1, ConnectionKind::SvK2, ConnectionKind::Adapted};
/// Kinds with sub-Riemannian limit formulas.
inline constexpr std::array<ConnectionKind, 3> kLimitKinds{
    ConnectionKind::SvK1, ConnectionKind::SvK2, ConnectionKind::Adapted};

std::string_view to_string(ConnectionKind kind) noexcept;
std::optional<ConnectionKind> kind_from_string(std::string_view name) noexcept;

using FrameMatrix = std::array<std::array<FrameVector, 3>, 3>;

struct CoeffTable {
    ConnectionKind kind = ConnectionKind::Adapted;
    double L = 1.0;
    FrameMatrix gamma{};

    const FrameVector& operator()(std::size_t i, std::size_t j) const noexcept { return gamma[i][j]; }
};

/// Table entries as constant + L * slope.
struct CoeffPoly {
    ConnectionKind kind = ConnectionKind::Adapted;
    FrameMatrix constant{};
    FrameMatrix slope{};

    CoeffTable at(double L) const;
};

CoeffPoly coeff_poly(ConnectionKind kind);
CoeffTable coeff_table(ConnectionKind kind, double L);

/// [X_i, X_j] in frame components.
FrameVector bracket(std::size_t i, std::size_t j) noexcept;

/// nabla_E V given V at the point and the directional derivative E(V^k) of its components.
FrameVector covariant(const CoeffTable& table, const FrameVector& direction, const FrameVector& field,
                      const FrameVector& field_derivative) noexcept;

/// nabla_{gamma'} V along a curve: V'^k X_k + sum gamma'^i V^j Gamma[i][j].
inline FrameVector covariant_along_curve(const CoeffTable& table, const FrameVector& velocity,
                                         const FrameVector& field, const FrameVector& field_rate) noexcept {
    return covariant(table, velocity, field, field_rate);
}

/// nabla_{gamma'} gamma'.
FrameVector covariant_acceleration(const CoeffTable& table, const CurveJet& c) noexcept;

/// R(X_i, X_j) X_k from the table and the bracket relations.
FrameVector curvature_tensor(const CoeffTable& table, std::size_t i, std::size_t j, std::size_t k) noexcept;

using CurvatureArray = std::array<std::array<std::array<FrameVector, 3>, 3>, 3>;
CurvatureArray curvature_array(const CoeffTable& table) noexcept;

/// -<R(e1,e2)e1, e2>_L by trilinear expansion.
double sectional(const CurvatureArray& R, double L, const FrameVector& e1, const FrameVector& e2) noexcept;
double sectional(const CoeffTable& table, const FrameVector& e1, const FrameVector& e2) noexcept;

/// T(X_i, X_j) = nabla_i X_j - nabla_j X_i - [X_i, X_j].
FrameVector torsion(const CoeffTable& table, std::size_t i, std::size_t j) noexcept;

/// max |<Gamma[i][j], X_k>_L + <X_j, Gamma[i][k]>_L| over all indices (zero for a metric connection).
double metric_defect(const CoeffTable& table) noexcept;

}  // namespace heis
