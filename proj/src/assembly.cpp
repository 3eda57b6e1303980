#include "polyvem/assembly.hpp"
#include "polyvem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <thread>

namespace polyvem {

double TimeFunction::value(double t) const {
    switch (kind) {
    case Kind::Constant:
        return p_max;
    case Kind::HalfSine:
        if (t < 0.0 || t > period)
            return 0.0;
        return p_max * std::sin(M_PI * t / period);
    }
    return 0.0;
}

Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& k, const Eigen::VectorXd& rhs) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(k);

    auto near_null_count = [&]() {
        const Eigen::VectorXd d = ldlt.vectorD();
        const double dmax = d.cwiseAbs().maxCoeff();
        int count = 0;
        for (Eigen::Index i = 0; i < d.size(); ++i)
            if (std::abs(d(i)) < 1e-10 * dmax)
                ++count;
        return count;
    };

    if (ldlt.info() != Eigen::Success)
        throw SingularSystem("factorization failed (suspected rigid mode)", -1);
    const Eigen::VectorXd x = ldlt.solve(rhs);
    const double rhs_norm = rhs.norm();
    const double res = (k * x - rhs).norm();
    if (!x.allFinite() || res > 1e-10 * std::max(rhs_norm, 1e-300)) {
        const int nn = near_null_count();
        throw SingularSystem("solve residual " + std::to_string(res) + " for |rhs| = " +
                                 std::to_string(rhs_norm) + ", " + std::to_string(nn) +
                                 " near-null pivots (suspected rigid mode)",
                             nn);
    }
    return x;
}

Model::Model(Mesh mesh, NeoHookean material, StabilizationConfig cfg, int threads)
    : mesh_(std::move(mesh)), material_(material), cfg_(cfg), threads_(std::max(1, threads)) {
    mesh_.validate();
}

void Model::add_bc(const BoundaryCondition& bc) {
    if (finalized_)
        throw ConfigError("cannot add boundary conditions after finalize()");
    bcs_.push_back(bc);
}

void Model::add_nodal_constraint(int node, int axis, double value) {
    if (finalized_)
        throw ConfigError("cannot add constraints after finalize()");
    if (node < 0 || node >= mesh_.n_nodes() || axis < 0 || axis >= dim())
        throw ConfigError("nodal constraint out of range");
    nodal_constraints_.emplace_back(node, axis, value);
}

void Model::resolve_traction_bc(const BoundaryCondition& bc) {
    const int d = dim();
    const auto it = mesh_.boundary_sets.find(bc.target);
    if (it == mesh_.boundary_sets.end())
        throw ConfigError("traction target set '" + bc.target + "' not found");

    // owning element of each boundary facet, keyed on sorted node ids
    std::map<std::vector<int>, int> owner;
    for (const auto& [e, facet] : mesh_.boundary_facets()) {
        std::vector<int> key = facet;
        std::sort(key.begin(), key.end());
        owner[key] = e;
    }

    const int bc_index = static_cast<int>(&bc - bcs_.data());
    for (const auto& facet : it->second.facets) {
        std::vector<int> key = facet;
        std::sort(key.begin(), key.end());
        const auto own = owner.find(key);
        if (own == owner.end())
            throw FacetNotOnBoundary("facet of set '" + bc.target + "' is not a boundary facet");
        const int e = own->second;
        const auto& ops = ops_[static_cast<std::size_t>(e)];

        // boundary integrals of the ansatz monomials over the facet
        Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
        auto monomials_at = [&](const Eigen::Vector3d& x) {
            Eigen::VectorXd q(d + 1);
            q(0) = 1.0;
            for (int m = 0; m < d; ++m)
                q(m + 1) = (x(m) - ops.proj.shift(m)) / ops.proj.scale;
            return q;
        };
        if (d == 2) {
            const Eigen::Vector3d a = mesh_.node_x(facet[0]);
            const Eigen::Vector3d c = mesh_.node_x(facet[1]);
            const double len = (c - a).norm();
            b = 0.5 * len * (monomials_at(a) + monomials_at(c)); // trapezoid, exact
        } else {
            for (const auto& t : geometry::fan_triangulation(static_cast<int>(facet.size()))) {
                geometry::SurfaceTriangle tri;
                tri.v0 = mesh_.node_x(facet[static_cast<std::size_t>(t[0])]);
                tri.v1 = mesh_.node_x(facet[static_cast<std::size_t>(t[1])]);
                tri.v2 = mesh_.node_x(facet[static_cast<std::size_t>(t[2])]);
                const double area = 0.5 * geometry::triangle_area_normal(tri).norm();
                b += area * monomials_at((tri.v0 + tri.v1 + tri.v2) / 3.0); // one-point rule
            }
        }

        // nodal force per unit traction component: Pi^T (b kron e_i)
        TractionFacet tf;
        tf.element = e;
        tf.bc = bc_index;
        tf.value = bc.value;
        tf.force_map.resize(ops.n_dofs(), d);
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd load = Eigen::VectorXd::Zero(ops.proj.n_params());
            for (int m = 0; m <= d; ++m)
                load(m * d + i) = b(m);
            tf.force_map.col(i) = ops.proj.pi_nabla.transpose() * load;
        }
        traction_facets_.push_back(std::move(tf));
    }
}

void Model::finalize() {
    if (finalized_)
        return;
    const int d = dim();
    const int n = n_dofs();

    ops_.reserve(static_cast<std::size_t>(mesh_.n_elements()));
    for (int e = 0; e < mesh_.n_elements(); ++e) {
        try {
            ops_.push_back(build_element_operators(mesh_, e, material_, cfg_));
        } catch (const Error& err) {
            throw Error("element " + std::to_string(e) + ": " + err.what(), err.exit_code());
        }
    }

    // Dirichlet partition
    free_index_.assign(static_cast<std::size_t>(n), 0);
    constrained_amp_.assign(static_cast<std::size_t>(n), 0.0);
    constrained_tf_.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t b = 0; b < bcs_.size(); ++b) {
        const auto& bc = bcs_[b];
        if (bc.kind != BcKind::DirichletFixed && bc.kind != BcKind::DirichletPrescribed)
            continue;
        const auto it = mesh_.boundary_sets.find(bc.target);
        if (it == mesh_.boundary_sets.end())
            throw ConfigError("dirichlet target set '" + bc.target + "' not found");
        for (int node : it->second.nodes)
            for (int axis = 0; axis < d; ++axis) {
                if (!bc.components[static_cast<std::size_t>(axis)])
                    continue;
                const int dof = node * d + axis;
                if (free_index_[static_cast<std::size_t>(dof)] == -1 &&
                    bc.kind == BcKind::DirichletPrescribed)
                    throw ConfigError("conflicting dirichlet conditions on node " +
                                      std::to_string(node));
                free_index_[static_cast<std::size_t>(dof)] = -1;
                if (bc.kind == BcKind::DirichletPrescribed) {
                    constrained_amp_[static_cast<std::size_t>(dof)] =
                        bc.value(axis);
                    constrained_tf_[static_cast<std::size_t>(dof)] = static_cast<int>(b);
                }
            }
    }
    for (const auto& [node, axis, value] : nodal_constraints_) {
        const int dof = node * d + axis;
        free_index_[static_cast<std::size_t>(dof)] = -1;
        constrained_amp_[static_cast<std::size_t>(dof)] = value;
        constrained_tf_[static_cast<std::size_t>(dof)] = -1;
    }
    n_free_ = 0;
    for (int i = 0; i < n; ++i)
        if (free_index_[static_cast<std::size_t>(i)] == 0)
            free_index_[static_cast<std::size_t>(i)] = n_free_++;

    // loads (need element operators, hence after ops_)
    body_force_map_.setZero(n, d);
    for (std::size_t b = 0; b < bcs_.size(); ++b) {
        const auto& bc = bcs_[b];
        if (bc.kind == BcKind::Traction) {
            resolve_traction_bc(bcs_[b]);
        } else if (bc.kind == BcKind::BodyForce) {
            body_loads_.push_back({bc.value, static_cast<int>(b)});
        } else if (bc.kind == BcKind::InitialVelocity ||
                   bc.kind == BcKind::DirichletFixed ||
                   bc.kind == BcKind::DirichletPrescribed) {
            if (mesh_.boundary_sets.find(bc.target) == mesh_.boundary_sets.end())
                throw ConfigError("target set '" + bc.target + "' not found");
        }
    }
    if (!body_loads_.empty()) {
        for (int e = 0; e < mesh_.n_elements(); ++e) {
            const auto& ops = ops_[static_cast<std::size_t>(e)];
            const Eigen::MatrixXd q = monomial_moment_matrix(
                mesh_, mesh_.elements[static_cast<std::size_t>(e)], ops.proj, cfg_.mass_scheme,
                ops.submesh);
            for (int i = 0; i < d; ++i) {
                Eigen::VectorXd load = Eigen::VectorXd::Zero(ops.proj.n_params());
                for (int m = 0; m <= d; ++m)
                    load(m * d + i) = q(0, m);
                const Eigen::VectorXd f = ops.proj.pi_nabla.transpose() * load;
                for (std::size_t a = 0; a < ops.node_ids.size(); ++a)
                    for (int c = 0; c < d; ++c)
                        body_force_map_(ops.node_ids[a] * d + c, i) +=
                            f(static_cast<int>(a) * d + c);
            }
        }
    }

    // global mass (constant in time)
    std::vector<Eigen::Triplet<double>> trip, trip_ff;
    for (int e = 0; e < mesh_.n_elements(); ++e) {
        const auto& ops = ops_[static_cast<std::size_t>(e)];
        const int ne = static_cast<int>(ops.node_ids.size());
        for (int a = 0; a < ne; ++a)
            for (int b2 = 0; b2 < ne; ++b2)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        const double v = ops.mass(a * d + i, b2 * d + j);
                        if (v == 0.0)
                            continue;
                        const int gi = ops.node_ids[static_cast<std::size_t>(a)] * d + i;
                        const int gj = ops.node_ids[static_cast<std::size_t>(b2)] * d + j;
                        trip.emplace_back(gi, gj, v);
                        const int fi = free_index_[static_cast<std::size_t>(gi)];
                        const int fj = free_index_[static_cast<std::size_t>(gj)];
                        if (fi >= 0 && fj >= 0)
                            trip_ff.emplace_back(fi, fj, v);
                    }
    }
    mass_full_.resize(n, n);
    mass_full_.setFromTriplets(trip.begin(), trip.end());
    mass_ff_.resize(n_free_, n_free_);
    mass_ff_.setFromTriplets(trip_ff.begin(), trip_ff.end());

    finalized_ = true;
}

void Model::apply_dirichlet(double t, Eigen::VectorXd& u_full) const {
    for (int i = 0; i < n_dofs(); ++i) {
        if (free_index_[static_cast<std::size_t>(i)] >= 0)
            continue;
        const int tf = constrained_tf_[static_cast<std::size_t>(i)];
        const double scale =
            (tf < 0) ? 1.0 : bcs_[static_cast<std::size_t>(tf)].time_function.value(t);
        u_full(i) = constrained_amp_[static_cast<std::size_t>(i)] * scale;
    }
}

Eigen::VectorXd Model::initial_velocity() const {
    const int d = dim();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n_dofs());
    for (const auto& bc : bcs_) {
        if (bc.kind != BcKind::InitialVelocity)
            continue;
        const auto& set = mesh_.boundary_sets.at(bc.target);
        for (int node : set.nodes)
            for (int axis = 0; axis < d; ++axis)
                v(node * d + axis) = bc.value(axis);
    }
    for (int i = 0; i < n_dofs(); ++i)
        if (is_constrained(i))
            v(i) = 0.0;
    return v;
}

Eigen::VectorXd Model::external_force(double t) const {
    const int d = dim();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n_dofs());
    for (const auto& tf : traction_facets_) {
        const double s = bcs_[static_cast<std::size_t>(tf.bc)].time_function.value(t);
        if (s == 0.0)
            continue;
        const auto& ops = ops_[static_cast<std::size_t>(tf.element)];
        const Eigen::VectorXd fe = tf.force_map * (s * tf.value.head(d));
        for (std::size_t a = 0; a < ops.node_ids.size(); ++a)
            for (int c = 0; c < d; ++c)
                f(ops.node_ids[a] * d + c) += fe(static_cast<int>(a) * d + c);
    }
    for (const auto& bl : body_loads_) {
        const double s = bcs_[static_cast<std::size_t>(bl.bc)].time_function.value(t);
        if (s == 0.0)
            continue;
        f += body_force_map_ * (s * bl.value.head(d));
    }
    return f;
}

Model::StaticResult Model::assemble_static(const Eigen::VectorXd& u_full, bool want_tangent,
                                           bool want_energy) const {
    const int d = dim();
    const int ne = mesh_.n_elements();

    struct Piece {
        double energy = 0.0;
        Eigen::VectorXd r;
        Eigen::MatrixXd k;
        std::string error;
        int error_code = 0;
    };
    std::vector<Piece> pieces(static_cast<std::size_t>(ne));

    auto work = [&](int begin, int end) {
        for (int e = begin; e < end; ++e) {
            auto& pc = pieces[static_cast<std::size_t>(e)];
            const auto& ops = ops_[static_cast<std::size_t>(e)];
            Eigen::VectorXd u_e(ops.n_dofs());
            for (std::size_t a = 0; a < ops.node_ids.size(); ++a)
                for (int c = 0; c < d; ++c)
                    u_e(static_cast<int>(a) * d + c) = u_full(ops.node_ids[a] * d + c);
            try {
                element_static(ops, material_, cfg_.beta_stat, u_e,
                               want_energy ? &pc.energy : nullptr, &pc.r,
                               want_tangent ? &pc.k : nullptr);
            } catch (const Error& err) {
                pc.error = "element " + std::to_string(e) + ": " + err.what();
                pc.error_code = err.exit_code();
            }
        }
    };

    if (threads_ <= 1 || ne < 2 * threads_) {
        work(0, ne);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (ne + threads_ - 1) / threads_;
        for (int t = 0; t < threads_; ++t) {
            const int b = t * chunk, e = std::min(ne, b + chunk);
            if (b < e)
                pool.emplace_back(work, b, e);
        }
        for (auto& th : pool)
            th.join();
    }

    // deterministic fixed-order reduction
    StaticResult out;
    out.residual = Eigen::VectorXd::Zero(n_dofs());
    std::vector<Eigen::Triplet<double>> trip;
    for (int e = 0; e < ne; ++e) {
        const auto& pc = pieces[static_cast<std::size_t>(e)];
        if (!pc.error.empty())
            throw Error(pc.error, pc.error_code);
        const auto& ops = ops_[static_cast<std::size_t>(e)];
        const int nn = static_cast<int>(ops.node_ids.size());
        out.strain_energy += pc.energy;
        for (int a = 0; a < nn; ++a)
            for (int c = 0; c < d; ++c)
                out.residual(ops.node_ids[static_cast<std::size_t>(a)] * d + c) +=
                    pc.r(a * d + c);
        if (want_tangent) {
            for (int a = 0; a < nn; ++a)
                for (int b2 = 0; b2 < nn; ++b2)
                    for (int i = 0; i < d; ++i)
                        for (int j = 0; j < d; ++j) {
                            const int gi = ops.node_ids[static_cast<std::size_t>(a)] * d + i;
                            const int gj = ops.node_ids[static_cast<std::size_t>(b2)] * d + j;
                            const int fi = free_index_[static_cast<std::size_t>(gi)];
                            const int fj = free_index_[static_cast<std::size_t>(gj)];
                            if (fi >= 0 && fj >= 0)
                                trip.emplace_back(fi, fj, pc.k(a * d + i, b2 * d + j));
                        }
        }
    }
    if (want_tangent) {
        out.k_ff.resize(n_free_, n_free_);
        out.k_ff.setFromTriplets(trip.begin(), trip.end());
    }
    return out;
}

Eigen::VectorXd Model::reduce(const Eigen::VectorXd& full) const {
    Eigen::VectorXd r(n_free_);
    for (int i = 0; i < n_dofs(); ++i) {
        const int f = free_index_[static_cast<std::size_t>(i)];
        if (f >= 0)
            r(f) = full(i);
    }
    return r;
}

void Model::expand_into(const Eigen::VectorXd& reduced, Eigen::VectorXd& full) const {
    for (int i = 0; i < n_dofs(); ++i) {
        const int f = free_index_[static_cast<std::size_t>(i)];
        if (f >= 0)
            full(i) = reduced(f);
    }
}

} // namespace polyvem
