#pragma once

#include "stlab/field.hpp"
#include "stlab/grid_operator.hpp"
#include "stlab/profile.hpp"

namespace stlab {

/// (U g)(x) = |eps Omega_0|^{-1/2} g(x_N), with g interpolated linearly.
Field apply_Ueps(const Profile& g, std::shared_ptr<const StructuredGrid> grid);

/// (V u)(t) = |eps Omega_0|^{-1/2} * trapezoidal cross-section integral of u
/// extended by zero into the holes, on the axial nodes of the grid.
Profile apply_Veps(const Field& u);

/// Discrete L2(Omega_eps) norm with trapezoidal weights (holes contribute 0).
double l2_norm(const Field& u);

/// || u - U g ||_{L2(Omega_eps)}, u extended by zero into the holes.
double l2_error(const Field& u, const Profile& g);

/// Anisotropic H1 distance
///   ( ||d||^2 + eps^2 ||grad' d||^2 + ||d_N d||^2 )^{1/2},  d = u - U g,
/// with central differences (mirror ghosts on the outer faces).
double h1_discrete_error(const Field& u, const Profile& g, double epsilon);

/// Discrete Dirichlet energy u^T K u = u^T S u - z ||u||^2.
double dirichlet_energy(const GridOperator& op, const Field& u);

/// Constant of the a priori bound ||u||^2 + ||grad u||^2 <= C ||f||^2.
double apriori_constant(double z);

}  // namespace stlab
