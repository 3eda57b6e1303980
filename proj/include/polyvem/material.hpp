#pragma once

#include <Eigen/Dense>

#include <array>

namespace polyvem {

/// Fourth-order tensor on R^3, indexed T(A,B,C,D). Major and minor
/// symmetric for the material tangent.
class Tensor4 {
public:
    double& operator()(int a, int b, int c, int d) {
        return v_[static_cast<std::size_t>(((a * 3 + b) * 3 + c) * 3 + d)];
    }
    double operator()(int a, int b, int c, int d) const {
        return v_[static_cast<std::size_t>(((a * 3 + b) * 3 + c) * 3 + d)];
    }

private:
    std::array<double, 81> v_{};
};

/// Compressible Neo-Hookean solid,
///   psi = kappa/4 (I3 - 1 - ln I3) + mu/2 (I3^(-1/3) I1 - 3)
/// with I1 = tr C, I3 = det C. Units: stress in N/mm^2 (MPa), density in
/// tonne/mm^3, so time comes out in seconds.
struct NeoHookean {
    double kappa = 0.0;
    double mu = 0.0;
    double rho = 0.0;
};

/// Conversion from engineering constants. Throws IncompressibleLimit for
/// nu >= 0.5 - 1e-9, ConfigError for out-of-range inputs.
NeoHookean from_engineering(double E, double nu, double rho);

/// Strain energy density. Throws InvertedElement if det C <= 0.
double energy(const NeoHookean& mat, const Eigen::Matrix3d& C);

/// Second Piola-Kirchhoff stress S = 2 d(psi)/dC.
Eigen::Matrix3d pk2_stress(const NeoHookean& mat, const Eigen::Matrix3d& C);

/// Material tangent 4 d^2(psi)/dC dC.
Tensor4 material_tangent(const NeoHookean& mat, const Eigen::Matrix3d& C);

/// First Piola-Kirchhoff stress and its derivative for a d-dimensional
/// deformation gradient (d = 2 means plane strain: F is embedded with
/// F_33 = 1 and the in-plane blocks are returned).
///
/// P is d x d with P(i,J); A is (d*d) x (d*d) with
/// A(i + J*d, k + L*d) = dP(i,J)/dF(k,L). Throws InvertedElement if
/// det F <= 0.
struct PiolaResult {
    double energy = 0.0;
    Eigen::MatrixXd P;
    Eigen::MatrixXd A;
};
PiolaResult first_piola(const NeoHookean& mat, const Eigen::MatrixXd& F, bool want_tangent);

/// Embeds a d x d deformation gradient into 3D (identity out-of-plane).
Eigen::Matrix3d embed_deformation_gradient(const Eigen::MatrixXd& F);

} // namespace polyvem
