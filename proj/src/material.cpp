#include "polyvem/material.hpp"
#include "polyvem/errors.hpp"

#include <cmath>

namespace polyvem {

NeoHookean from_engineering(double E, double nu, double rho) {
    if (E <= 0.0)
        throw ConfigError("elastic modulus must be positive");
    if (nu <= -1.0)
        throw ConfigError("Poisson ratio must be greater than -1");
    if (nu >= 0.5 - 1e-9)
        throw IncompressibleLimit("nu = " + std::to_string(nu));
    if (rho < 0.0)
        throw ConfigError("density must be non-negative");
    NeoHookean m;
    m.kappa = E / (3.0 * (1.0 - 2.0 * nu));
    m.mu = E / (2.0 * (1.0 + nu));
    m.rho = rho;
    return m;
}

double energy(const NeoHookean& mat, const Eigen::Matrix3d& C) {
    const double i1 = C.trace();
    const double i3 = C.determinant();
    if (i3 <= 0.0)
        throw InvertedElement("det C = " + std::to_string(i3));
    return mat.kappa / 4.0 * (i3 - 1.0 - std::log(i3)) +
           mat.mu / 2.0 * (std::pow(i3, -1.0 / 3.0) * i1 - 3.0);
}

Eigen::Matrix3d pk2_stress(const NeoHookean& mat, const Eigen::Matrix3d& C) {
    const double i1 = C.trace();
    const double i3 = C.determinant();
    if (i3 <= 0.0)
        throw InvertedElement("det C = " + std::to_string(i3));
    const Eigen::Matrix3d Ci = C.inverse();
    const double i3m13 = std::pow(i3, -1.0 / 3.0);
    return mat.kappa / 2.0 * (i3 - 1.0) * Ci +
           mat.mu * i3m13 * (Eigen::Matrix3d::Identity() - i1 / 3.0 * Ci);
}

Tensor4 material_tangent(const NeoHookean& mat, const Eigen::Matrix3d& C) {
    const double i1 = C.trace();
    const double i3 = C.determinant();
    if (i3 <= 0.0)
        throw InvertedElement("det C = " + std::to_string(i3));
    const Eigen::Matrix3d Ci = C.inverse();
    const double i3m13 = std::pow(i3, -1.0 / 3.0);
    const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();

    Tensor4 t;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d) {
                    const double cici = 0.5 * (Ci(a, c) * Ci(b, d) + Ci(a, d) * Ci(b, c));
                    t(a, b, c, d) =
                        mat.kappa * (i3 * Ci(a, b) * Ci(c, d) - (i3 - 1.0) * cici) +
                        2.0 * mat.mu * i3m13 *
                            (-(id(a, b) * Ci(c, d) + Ci(a, b) * id(c, d)) / 3.0 +
                             i1 / 9.0 * Ci(a, b) * Ci(c, d) + i1 / 3.0 * cici);
                }
    return t;
}

Eigen::Matrix3d embed_deformation_gradient(const Eigen::MatrixXd& F) {
    Eigen::Matrix3d F3 = Eigen::Matrix3d::Identity();
    F3.topLeftCorner(F.rows(), F.cols()) = F;
    return F3;
}

PiolaResult first_piola(const NeoHookean& mat, const Eigen::MatrixXd& F, bool want_tangent) {
    const int d = static_cast<int>(F.rows());
    const Eigen::Matrix3d F3 = embed_deformation_gradient(F);
    if (F3.determinant() <= 0.0)
        throw InvertedElement("det F = " + std::to_string(F3.determinant()));
    const Eigen::Matrix3d C = F3.transpose() * F3;

    PiolaResult out;
    out.energy = energy(mat, C);
    const Eigen::Matrix3d S = pk2_stress(mat, C);
    out.P = (F3 * S).topLeftCorner(d, d);

    if (want_tangent) {
        const Tensor4 cc = material_tangent(mat, C);
        out.A.resize(d * d, d * d);
        // A_{iJkL} = delta_ik S_JL + F_iA F_kB CC_{AJBL}
        for (int i = 0; i < d; ++i)
            for (int jj = 0; jj < d; ++jj)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) {
                        double v = (i == k) ? S(jj, l) : 0.0;
                        for (int a = 0; a < 3; ++a)
                            for (int b = 0; b < 3; ++b)
                                v += F3(i, a) * F3(k, b) * cc(a, jj, b, l);
                        out.A(i + jj * d, k + l * d) = v;
                    }
    }
    return out;
}

} // namespace polyvem
