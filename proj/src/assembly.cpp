#include "hembem/assembly.hpp"

#include "hembem/error.hpp"
#include "hembem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

namespace hembem {

namespace {

enum class Op { Single, Double, Hyper };

struct Panel {
    Vec2 a, b, t, n;
    double h;
    Vec2 at(double xi) const { return a + 0.5 * (xi + 1.0) * (b - a); }
};

Panel make_panel(const BoundaryMesh& mesh, int e)
{
    return {mesh.start(e), mesh.end(e), mesh.tangent(e), mesh.normal(e), mesh.length(e)};
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b)
{
    const Vec2 d = b - a;
    const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

double segment_distance(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1)
{
    return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                     point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

inline void add_product(Eigen::MatrixXd& blk, const double* fa, int na, const double* fb, int nb,
                        const Mat2& k)
{
    for (int i = 0; i < na; ++i) {
        if (fa[i] == 0.0)
            continue;
        for (int j = 0; j < nb; ++j) {
            const double c = fa[i] * fb[j];
            blk(2 * i, 2 * j) += c * k(0, 0);
            blk(2 * i, 2 * j + 1) += c * k(0, 1);
            blk(2 * i + 1, 2 * j) += c * k(1, 0);
            blk(2 * i + 1, 2 * j + 1) += c * k(1, 1);
        }
    }
}

// Local Galerkin block of one operator for one pair of panels.
class PairIntegrator {
public:
    PairIntegrator(Op op, const Material& mat, const QuadratureOptions& opts)
        : op_(op), kc_(mat), opts_(opts)
    {
        if (op == Op::Single) {
            alpha_ = kc_.c1;
            beta_ = kc_.c1 * kc_.c2;
        } else {
            alpha_ = beta_ = kc_.hyper;
        }
    }

    Eigen::MatrixXd block(const BoundaryMesh& mesh, int ex, const LocalBasis& A, int ey,
                          const LocalBasis& B)
    {
        ex_ = ex;
        ey_ = ey;
        X_ = make_panel(mesh, ex);
        Y_ = make_panel(mesh, ey);
        A_ = &A;
        B_ = &B;
        na_ = A.count();
        nb_ = B.count();
        const bool deriv = (op_ == Op::Hyper);
        da_ = std::max(0, A.polynomial_degree() - (deriv ? 1 : 0));
        db_ = std::max(0, B.polynomial_degree() - (deriv ? 1 : 0));
        blk_.setZero(2 * na_, 2 * nb_);

        const Element& ax = mesh.elements[ex];
        const Element& ay = mesh.elements[ey];
        if (ex == ey) {
            if (op_ == Op::Double)
                identical_cauchy();
            else
                identical_log();
        } else if (ax.v1 == ay.v0) {
            adjacent(1.0, -1.0);
        } else if (ax.v0 == ay.v1) {
            adjacent(-1.0, 1.0);
        } else if (ax.v0 == ay.v0) {
            adjacent(-1.0, -1.0);
        } else if (ax.v1 == ay.v1) {
            adjacent(1.0, 1.0);
        } else {
            regular(-1.0, 1.0, -1.0, 1.0, 0);
        }
        if (!blk_.allFinite())
            throw NumericalError("assembly: non-finite entries for element pair (" + std::to_string(ex)
                                 + ", " + std::to_string(ey) + ")");
        return blk_;
    }

private:
    void shapes_x(double xi, double* out) const { shapes(*A_, X_.h, xi, out); }
    void shapes_y(double eta, double* out) const { shapes(*B_, Y_.h, eta, out); }

    void shapes(const LocalBasis& basis, double h, double xi, double* out) const
    {
        if (op_ == Op::Hyper) {
            basis.evaluate(xi, nullptr, out);
            for (int i = 0; i < basis.count(); ++i)
                out[i] *= 2.0 / h;
        } else {
            basis.evaluate(xi, out, nullptr);
        }
    }

    Mat2 kernel(const Vec2& r) const
    {
        switch (op_) {
        case Op::Single:
            return kc_.single_layer(r);
        case Op::Double:
            return kc_.double_layer(r, Y_.n);
        case Op::Hyper:
            return kc_.hypersingular(r);
        }
        return Mat2::Zero();
    }

    void regular(double x0, double x1, double y0, double y1, int depth)
    {
        const Vec2 xa = X_.at(x0), xb = X_.at(x1), ya = Y_.at(y0), yb = Y_.at(y1);
        const double lx = 0.5 * (x1 - x0) * X_.h, ly = 0.5 * (y1 - y0) * Y_.h;
        const double dist = segment_distance(xa, xb, ya, yb);
        if (dist < opts_.admissibility * std::max(lx, ly)) {
            if (depth >= opts_.max_depth)
                throw NumericalError("assembly: near-singular quadrature did not resolve element pair ("
                                     + std::to_string(ex_) + ", " + std::to_string(ey_) + ")");
            if (lx >= ly) {
                const double xm = 0.5 * (x0 + x1);
                regular(x0, xm, y0, y1, depth + 1);
                regular(xm, x1, y0, y1, depth + 1);
            } else {
                const double ym = 0.5 * (y0 + y1);
                regular(x0, x1, y0, ym, depth + 1);
                regular(x0, x1, ym, y1, depth + 1);
            }
            return;
        }
        const QuadratureRule qx = gauss_legendre(da_ + opts_.regular_extra, x0, x1);
        const QuadratureRule qy = gauss_legendre(db_ + opts_.regular_extra, y0, y1);
        const int mx = qx.size(), my = qy.size();
        std::vector<double> fa(mx * na_), fb(my * nb_), wx(mx), wy(my);
        std::vector<Vec2> px(mx), py(my);
        for (int q = 0; q < mx; ++q) {
            shapes_x(qx.points[q], &fa[q * na_]);
            px[q] = X_.at(qx.points[q]);
            wx[q] = qx.weights[q] * 0.5 * X_.h;
        }
        for (int q = 0; q < my; ++q) {
            shapes_y(qy.points[q], &fb[q * nb_]);
            py[q] = Y_.at(qy.points[q]);
            wy[q] = qy.weights[q] * 0.5 * Y_.h;
        }
        for (int q = 0; q < mx; ++q)
            for (int s = 0; s < my; ++s)
                add_product(blk_, &fa[q * na_], na_, &fb[s * nb_], nb_,
                            kernel(px[q] - py[s]) * (wx[q] * wy[s]));
    }

    // Same panel, log-type kernel alpha(-log|r|) I + beta rhat rhat^T with r = +-h w tau, z = 2w.
    void identical_log()
    {
        const int deg = da_ + db_ + 1;
        const int n = (deg + 2) / 2 + opts_.singular_extra;
        const QuadratureRule& ql = gauss_log(n);
        const QuadratureRule qg = gauss_legendre(n, 0.0, 1.0);
        const int nin = (da_ + db_ + 2) / 2 + opts_.singular_extra;
        const double h = X_.h;
        const double scale = 0.25 * h * h * 2.0;
        Mat2 smooth = -alpha_ * std::log(h) * Mat2::Identity() + beta_ * X_.t * X_.t.transpose();
        const Mat2 logk = alpha_ * Mat2::Identity();

        std::vector<double> a0(na_), a1(na_), b0(nb_), b1(nb_);
        auto inner = [&](double w) {
            Eigen::MatrixXd m = Eigen::MatrixXd::Zero(na_, nb_);
            const QuadratureRule qi = gauss_legendre(nin, -1.0 + 2.0 * w, 1.0);
            for (int k = 0; k < qi.size(); ++k) {
                const double xi = qi.points[k];
                shapes_x(xi, a0.data());
                shapes_x(xi - 2.0 * w, a1.data());
                shapes_y(xi, b0.data());
                shapes_y(xi - 2.0 * w, b1.data());
                for (int i = 0; i < na_; ++i)
                    for (int j = 0; j < nb_; ++j)
                        m(i, j) += qi.weights[k] * (a0[i] * b1[j] + a1[i] * b0[j]);
            }
            return m;
        };
        auto scatter = [&](const Eigen::MatrixXd& m, const Mat2& k) {
            for (int i = 0; i < na_; ++i)
                for (int j = 0; j < nb_; ++j)
                    blk_.block<2, 2>(2 * i, 2 * j) += m(i, j) * k;
        };
        for (int k = 0; k < n; ++k) {
            scatter(inner(ql.points[k]) * (scale * ql.weights[k]), logk);
            scatter(inner(qg.points[k]) * (scale * qg.weights[k]), smooth);
        }
    }

    // Same panel, Cauchy kernel Q/(eta - xi): antisymmetrized principal value.
    void identical_cauchy()
    {
        const int n = (da_ + db_) / 2 + 1 + opts_.singular_extra;
        const QuadratureRule& q1 = gauss_legendre(n);
        const QuadratureRule& q2 = gauss_legendre(n + 1);
        std::vector<double> ax(na_), ay(na_), bx(nb_), by(nb_);
        Eigen::MatrixXd c = Eigen::MatrixXd::Zero(na_, nb_);
        for (int k = 0; k < q1.size(); ++k) {
            const double xi = q1.points[k];
            shapes_x(xi, ax.data());
            shapes_y(xi, bx.data());
            for (int l = 0; l < q2.size(); ++l) {
                const double eta = q2.points[l];
                shapes_x(eta, ay.data());
                shapes_y(eta, by.data());
                const double w = 0.5 * q1.weights[k] * q2.weights[l] / (eta - xi);
                for (int i = 0; i < na_; ++i)
                    for (int j = 0; j < nb_; ++j)
                        c(i, j) += w * (ax[i] * by[j] - ay[i] * bx[j]);
            }
        }
        const double h = X_.h;
        const Mat2 q = kc_.double_layer(-0.5 * h * X_.t, X_.n) * (0.25 * h * h);
        for (int i = 0; i < na_; ++i)
            for (int j = 0; j < nb_; ++j)
                blk_.block<2, 2>(2 * i, 2 * j) += c(i, j) * q;
    }

    // Panels sharing the vertex at xi = sx (X) and eta = sy (Y).
    void adjacent(double sx, double sy)
    {
        const Vec2 ex = -sx * X_.t, ey = -sy * Y_.t;
        const double ell = std::min(X_.h, Y_.h);
        const int deg = da_ + db_ + 1;
        const int nu = (deg + 2) / 2 + opts_.singular_extra;
        const QuadratureRule& ql = gauss_log(nu);
        const QuadratureRule qg = gauss_legendre(nu, 0.0, 1.0);
        const QuadratureRule qv = gauss_legendre(da_ + db_ + opts_.angular_extra, 0.0, 1.0);
        std::vector<double> fa(na_), fb(nb_);

        auto xi_of = [&](double sigma) { return sx * (1.0 - 2.0 * ell * sigma / X_.h); };
        auto eta_of = [&](double tau) { return sy * (1.0 - 2.0 * ell * tau / Y_.h); };

        for (int region = 0; region < 2; ++region) {
            for (int iv = 0; iv < qv.size(); ++iv) {
                const double v = qv.points[iv];
                const Vec2 d = (region == 0) ? Vec2(ex - v * ey) : Vec2(v * ex - ey);
                const double wv = qv.weights[iv] * ell * ell;
                auto point = [&](double u, double& sigma, double& tau) {
                    sigma = (region == 0) ? u : u * v;
                    tau = (region == 0) ? u * v : u;
                };
                if (op_ == Op::Double) {
                    const Mat2 k = kc_.double_layer(ell * d, Y_.n);
                    for (int iu = 0; iu < qg.size(); ++iu) {
                        double sigma, tau;
                        point(qg.points[iu], sigma, tau);
                        shapes_x(xi_of(sigma), fa.data());
                        shapes_y(eta_of(tau), fb.data());
                        add_product(blk_, fa.data(), na_, fb.data(), nb_, k * (qg.weights[iu] * wv));
                    }
                } else {
                    const double dn = d.norm();
                    const Vec2 dh = d / dn;
                    const Mat2 smooth = -alpha_ * std::log(ell * dn) * Mat2::Identity()
                                        + beta_ * dh * dh.transpose();
                    const Mat2 logk = alpha_ * Mat2::Identity();
                    for (int iu = 0; iu < nu; ++iu) {
                        double sigma, tau;
                        double u = ql.points[iu];
                        point(u, sigma, tau);
                        shapes_x(xi_of(sigma), fa.data());
                        shapes_y(eta_of(tau), fb.data());
                        add_product(blk_, fa.data(), na_, fb.data(), nb_, logk * (u * ql.weights[iu] * wv));
                        u = qg.points[iu];
                        point(u, sigma, tau);
                        shapes_x(xi_of(sigma), fa.data());
                        shapes_y(eta_of(tau), fb.data());
                        add_product(blk_, fa.data(), na_, fb.data(), nb_, smooth * (u * qg.weights[iu] * wv));
                    }
                }
            }
        }
        // part of the longer panel beyond distance ell from the shared vertex
        if (X_.h > ell * (1.0 + 1e-12)) {
            const double cut = xi_of(1.0);
            regular(std::min(cut, -sx), std::max(cut, -sx), -1.0, 1.0, 0);
        } else if (Y_.h > ell * (1.0 + 1e-12)) {
            const double cut = eta_of(1.0);
            regular(-1.0, 1.0, std::min(cut, -sy), std::max(cut, -sy), 0);
        }
    }

    Op op_;
    KernelConstants kc_;
    QuadratureOptions opts_;
    double alpha_ = 0.0, beta_ = 0.0;
    int ex_ = 0, ey_ = 0;
    Panel X_, Y_;
    const LocalBasis* A_ = nullptr;
    const LocalBasis* B_ = nullptr;
    int na_ = 0, nb_ = 0, da_ = 0, db_ = 0;
    Eigen::MatrixXd blk_;
};

void scatter(Eigen::MatrixXd& m, const std::vector<int>& rows, const std::vector<int>& cols,
             const Eigen::MatrixXd& blk, bool transpose)
{
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0)
            continue;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j] < 0)
                continue;
            if (transpose)
                m(cols[j], rows[i]) += blk(i, j);
            else
                m(rows[i], cols[j]) += blk(i, j);
        }
    }
}

bool has_dofs(const std::vector<int>& map)
{
    return std::any_of(map.begin(), map.end(), [](int i) { return i >= 0; });
}

Eigen::MatrixXd assemble(Op op, const BoundaryMesh& mesh, const TraceSpace& test, const TraceSpace& trial,
                         const Material& mat, const QuadratureOptions& opts)
{
    check_geometry_scaling(mesh);
    if (test.elements() != mesh.size() || trial.elements() != mesh.size())
        throw DomainError("assembly: space does not match mesh");
    const bool symmetric = (op != Op::Double) && (&test == &trial);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(test.size, trial.size);
    PairIntegrator pi(op, mat, opts);
    for (int ex = 0; ex < mesh.size(); ++ex) {
        if (!has_dofs(test.map[ex]))
            continue;
        for (int ey = symmetric ? ex : 0; ey < mesh.size(); ++ey) {
            if (!has_dofs(trial.map[ey]))
                continue;
            Eigen::MatrixXd blk = pi.block(mesh, ex, test.basis[ex], ey, trial.basis[ey]);
            if (symmetric && ex == ey) {
                const Eigen::MatrixXd sym = 0.5 * (blk + blk.transpose());
                blk = sym;
            }
            scatter(m, test.map[ex], trial.map[ey], blk, false);
            if (symmetric && ex != ey)
                scatter(m, test.map[ex], trial.map[ey], blk, true);
        }
    }
    return m;
}

} // namespace

void check_geometry_scaling(const BoundaryMesh& mesh)
{
    Vec2 lo = mesh.vertices.front(), hi = lo;
    for (const Vec2& v : mesh.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    const Vec2 centre = 0.5 * (lo + hi);
    double radius = 0.0;
    for (const Vec2& v : mesh.vertices)
        radius = std::max(radius, (v - centre).norm());
    if (radius >= 1.0)
        throw ConfigError("geometry must fit into a disc of radius < 1; reduce the geometry scale");
}

Eigen::MatrixXd assemble_V(const BoundaryMesh& mesh, const TraceSpace& test, const TraceSpace& trial,
                           const Material& mat, const QuadratureOptions& opts)
{
    return assemble(Op::Single, mesh, test, trial, mat, opts);
}

Eigen::MatrixXd assemble_K(const BoundaryMesh& mesh, const TraceSpace& test, const TraceSpace& trial,
                           const Material& mat, const QuadratureOptions& opts)
{
    return assemble(Op::Double, mesh, test, trial, mat, opts);
}

Eigen::MatrixXd assemble_W(const BoundaryMesh& mesh, const TraceSpace& test, const TraceSpace& trial,
                           const Material& mat, const QuadratureOptions& opts)
{
    return assemble(Op::Hyper, mesh, test, trial, mat, opts);
}

Eigen::MatrixXd assemble_I(const BoundaryMesh& mesh, const TraceSpace& test, const TraceSpace& trial)
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(test.size, trial.size);
    for (int e = 0; e < mesh.size(); ++e) {
        const LocalBasis& A = test.basis[e];
        const LocalBasis& B = trial.basis[e];
        const int na = A.count(), nb = B.count();
        const QuadratureRule& q = gauss_legendre((A.polynomial_degree() + B.polynomial_degree()) / 2 + 1);
        std::vector<double> fa(na), fb(nb);
        Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(2 * na, 2 * nb);
        const double jac = 0.5 * mesh.length(e);
        for (int k = 0; k < q.size(); ++k) {
            A.evaluate(q.points[k], fa.data(), nullptr);
            B.evaluate(q.points[k], fb.data(), nullptr);
            for (int i = 0; i < na; ++i)
                for (int j = 0; j < nb; ++j)
                    for (int c = 0; c < 2; ++c)
                        blk(2 * i + c, 2 * j + c) += q.weights[k] * jac * fa[i] * fb[j];
        }
        scatter(m, test.map[e], trial.map[e], blk, false);
    }
    return m;
}

BemMatrices assemble_bem(const BoundaryMesh& mesh, const DofMap& dofs, const Material& mat,
                         const QuadratureOptions& opts)
{
    BemMatrices b;
    b.V = assemble_V(mesh, dofs.density(), dofs.density(), mat, opts);
    b.K = assemble_K(mesh, dofs.density(), dofs.full(), mat, opts);
    b.W = assemble_W(mesh, dofs.full(), dofs.full(), mat, opts);
    b.I = assemble_I(mesh, dofs.density(), dofs.full());
    return b;
}

void write_matrix_binary(std::ostream& out, const Eigen::MatrixXd& m)
{
    const std::uint64_t header[2] = {static_cast<std::uint64_t>(m.rows()),
                                     static_cast<std::uint64_t>(m.cols())};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(v));
        }
}

Eigen::MatrixXd read_matrix_binary(std::istream& in)
{
    std::uint64_t header[2];
    if (!in.read(reinterpret_cast<char*>(header), sizeof(header)))
        throw ConfigError("matrix dump: truncated header");
    Eigen::MatrixXd m(header[0], header[1]);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (!in.read(reinterpret_cast<char*>(&m(i, j)), sizeof(double)))
                throw ConfigError("matrix dump: truncated data");
    return m;
}

} // namespace hembem
