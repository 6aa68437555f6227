#include "cpotts/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"

namespace cpotts {
namespace {

using std::numbers::pi;

constexpr double kPoleTol = 1e-12;

Cplx log_sinh(Cplx z) {
    const Cplx s = std::sinh(z);
    if (std::abs(s) < kPoleTol)
        throw std::runtime_error("root configuration hits a sinh pole");
    return std::log(s);
}

Cplx coth(Cplx z) {
    const Cplx s = std::sinh(z);
    if (std::abs(s) < kPoleTol)
        throw std::runtime_error("root configuration hits a sinh pole");
    return std::cosh(z) / s;
}

// bring y into (hi - period, hi]
double wrap_into(double y, double period, double hi) {
    if (!std::isfinite(y)) throw std::runtime_error("non-finite Bethe root");
    y += std::floor((hi - y) / period) * period;
    while (y > hi) y -= period;
    while (y <= hi - period) y += period;
    return y;
}

void canonicalize(RootConfiguration& c) {
    // band edges sit on the axis lines; snap the lower edge up so equivalent
    // roots always display at +pi/2 (lambda) and +pi/4 (mu)
    for (auto& z : c.lambda) {
        double y = wrap_into(z.imag(), pi, pi / 2);
        if (y < -pi / 2 + 1e-9) y = pi / 2;
        z = Cplx(z.real(), y);
    }
    for (auto& w : c.mu) {
        double y = wrap_into(w.imag(), pi / 2, pi / 4);
        if (y < -pi / 4 + 1e-9) y = pi / 4;
        w = Cplx(w.real(), y);
    }
}

// Log-form sums before branch-integer subtraction; equation order: the m1
// lambda equations, then the m2 mu equations.
std::vector<Cplx> raw_residual(const RootConfiguration& c) {
    const Cplx ig(0, c.gamma);
    const int m1 = c.m1(), m2 = c.m2();
    std::vector<Cplx> out(m1 + m2);
    for (int i = 0; i < m1; ++i) {
        Cplx f = double(c.L) * (log_sinh(c.lambda[i] - 0.5 * ig) -
                                log_sinh(c.lambda[i] + 0.5 * ig)) +
                 Cplx(0, 2 * c.phi1);
        for (int j = 0; j < m1; ++j) {
            if (j == i) continue;
            const Cplx d = c.lambda[i] - c.lambda[j];
            f -= log_sinh(d - ig) - log_sinh(d + ig);
        }
        for (int k = 0; k < m2; ++k) {
            const Cplx d = 2.0 * (c.lambda[i] - c.mu[k]);
            f -= log_sinh(d + ig) - log_sinh(d - ig);
        }
        out[i] = f;
    }
    for (int k = 0; k < m2; ++k) {
        Cplx f = Cplx(0, 2 * (c.phi1 - c.phi2));
        for (int j = 0; j < m1; ++j) {
            const Cplx d = 2.0 * (c.mu[k] - c.lambda[j]);
            f += log_sinh(d - ig) - log_sinh(d + ig);
        }
        for (int l = 0; l < m2; ++l) {
            if (l == k) continue;
            const Cplx d = 2.0 * (c.mu[k] - c.mu[l]);
            f -= log_sinh(d - 2.0 * ig) - log_sinh(d + 2.0 * ig);
        }
        out[m1 + k] = f;
    }
    return out;
}

// d(equation)/d(root), all complex-analytic.
Eigen::MatrixXcd complex_jacobian(const RootConfiguration& c) {
    const Cplx ig(0, c.gamma);
    const int m1 = c.m1(), m2 = c.m2(), m = m1 + m2;
    Eigen::MatrixXcd jac = Eigen::MatrixXcd::Zero(m, m);
    for (int i = 0; i < m1; ++i) {
        Cplx diag = double(c.L) * (coth(c.lambda[i] - 0.5 * ig) -
                                   coth(c.lambda[i] + 0.5 * ig));
        for (int j = 0; j < m1; ++j) {
            if (j == i) continue;
            const Cplx d = c.lambda[i] - c.lambda[j];
            const Cplx t = coth(d - ig) - coth(d + ig);
            diag -= t;
            jac(i, j) = t;
        }
        for (int k = 0; k < m2; ++k) {
            const Cplx d = 2.0 * (c.lambda[i] - c.mu[k]);
            const Cplx t = 2.0 * (coth(d + ig) - coth(d - ig));
            diag -= t;
            jac(i, m1 + k) = t;
        }
        jac(i, i) = diag;
    }
    for (int k = 0; k < m2; ++k) {
        Cplx diag = 0;
        for (int j = 0; j < m1; ++j) {
            const Cplx d = 2.0 * (c.mu[k] - c.lambda[j]);
            const Cplx t = 2.0 * (coth(d - ig) - coth(d + ig));
            diag += t;
            jac(m1 + k, j) = -t;
        }
        for (int l = 0; l < m2; ++l) {
            if (l == k) continue;
            const Cplx d = 2.0 * (c.mu[k] - c.mu[l]);
            const Cplx t = 2.0 * (coth(d - 2.0 * ig) - coth(d + 2.0 * ig));
            diag -= t;
            jac(m1 + k, m1 + l) = t;
        }
        jac(m1 + k, m1 + k) = diag;
    }
    return jac;
}

void rebase_branch(RootConfiguration& c, const std::vector<Cplx>& raw) {
    c.branch.resize(raw.size());
    for (size_t i = 0; i < raw.size(); ++i)
        c.branch[i] = int(std::lround(raw[i].imag() / (2 * pi)));
}

std::vector<Cplx> branch_residual(const RootConfiguration& c,
                                  const std::vector<Cplx>& raw) {
    std::vector<Cplx> r(raw);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= Cplx(0, 2 * pi * c.branch[i]);
    return r;
}

double max_abs(const std::vector<Cplx>& v) {
    double m = 0;
    for (const Cplx& z : v) m = std::max(m, std::abs(z));
    return m;
}

void check_collisions(const RootConfiguration& c) {
    auto clash = [](Cplx a, Cplx b, double period) {
        const Cplx d = a - b;
        return std::hypot(d.real(), std::remainder(d.imag(), period)) < 1e-10;
    };
    for (int i = 0; i < c.m1(); ++i)
        for (int j = i + 1; j < c.m1(); ++j)
            if (clash(c.lambda[i], c.lambda[j], pi))
                throw std::runtime_error("lambda-roots collided");
    for (int i = 0; i < c.m2(); ++i)
        for (int j = i + 1; j < c.m2(); ++j)
            if (clash(c.mu[i], c.mu[j], pi / 2))
                throw std::runtime_error("mu-roots collided");
}

void classify_tags(RootConfiguration& c) {
    const double y2 = pi / 4 - c.gamma / 2;
    const int m1 = c.m1();
    c.tags.assign(m1 + c.m2(), RootTag::Generic);
    std::vector<int> paired(m1, -1);
    for (int i = 0; i < m1; ++i)
        for (int j = i + 1; j < m1; ++j) {
            const Cplx d = c.lambda[i] - std::conj(c.lambda[j]);
            if (paired[j] < 0 && paired[i] < 0 &&
                std::hypot(d.real(), std::remainder(d.imag(), pi)) < 1e-6) {
                paired[i] = j;
                paired[j] = i;
            }
        }
    for (int i = 0; i < m1; ++i) {
        const double im = c.lambda[i].imag();
        if (std::abs(std::remainder(im, pi)) < 1e-3) {
            c.tags[i] = RootTag::RealAxis;
        } else if (std::abs(std::remainder(im - pi / 2, pi)) < 1e-3) {
            c.tags[i] = RootTag::PiHalfAxis;
        } else if (paired[i] >= 0) {
            c.tags[i] = std::abs(std::abs(im) - y2) <
                                std::abs(std::abs(im) - c.gamma / 2)
                            ? RootTag::TwoString
                            : RootTag::TwoStarString;
        }
    }
    // pi/2 roots with an opposite-real-part companion form antistrings
    for (int i = 0; i < m1; ++i) {
        if (c.tags[i] != RootTag::PiHalfAxis) continue;
        for (int j = 0; j < m1; ++j)
            if (j != i && c.tags[j] == RootTag::PiHalfAxis &&
                std::abs(c.lambda[i].real() + c.lambda[j].real()) < 1e-6 &&
                std::abs(c.lambda[i].real()) > 1e-6) {
                c.tags[i] = RootTag::Antistring;
                break;
            }
    }
    for (int k = 0; k < c.m2(); ++k) {
        const double im = c.mu[k].imag();
        if (std::abs(std::remainder(im - pi / 4, pi / 2)) < 1e-3)
            c.tags[m1 + k] = RootTag::MuAxis;
        else if (std::abs(std::remainder(im, pi / 2)) < 1e-3)
            c.tags[m1 + k] = RootTag::MuReal;
    }
}

// Conjugation-symmetric parametrization: conjugate pairs carry one complex
// unknown, axis-pinned roots one real unknown.  kind: 0 lambda pair, 1
// lambda axis, 2 mu pair, 3 mu axis.
struct Group {
    int kind;
    int a, b;         // root indices within their family (b for pairs)
    double fixed_im;  // for axis roots
};

std::vector<Group> detect_groups(RootConfiguration& c) {
    std::vector<Group> groups;
    const int m1 = c.m1(), m2 = c.m2();
    std::vector<char> used(m1, 0);
    for (int i = 0; i < m1; ++i) {
        if (used[i]) continue;
        const double im = c.lambda[i].imag();
        if (std::abs(im) < 1e-3) {
            c.lambda[i] = Cplx(c.lambda[i].real(), 0);
            groups.push_back({1, i, -1, 0.0});
            used[i] = 1;
            continue;
        }
        if (std::abs(im - pi / 2) < 1e-3) {
            c.lambda[i] = Cplx(c.lambda[i].real(), pi / 2);
            groups.push_back({1, i, -1, pi / 2});
            used[i] = 1;
            continue;
        }
        int partner = -1;
        for (int j = i + 1; j < m1; ++j) {
            if (used[j]) continue;
            const Cplx d = c.lambda[j] - std::conj(c.lambda[i]);
            if (std::hypot(d.real(), std::remainder(d.imag(), pi)) < 1e-6) {
                partner = j;
                break;
            }
        }
        if (partner < 0)
            throw std::runtime_error(
                "configuration is not conjugation-symmetric");
        const int up = im > 0 ? i : partner;
        const int dn = up == i ? partner : i;
        c.lambda[dn] = std::conj(c.lambda[up]);
        groups.push_back({0, up, dn, 0.0});
        used[i] = used[partner] = 1;
    }
    std::vector<char> musd(m2, 0);
    for (int k = 0; k < m2; ++k) {
        if (musd[k]) continue;
        const double im = c.mu[k].imag();
        if (std::abs(im - pi / 4) < 1e-3) {
            c.mu[k] = Cplx(c.mu[k].real(), pi / 4);
            groups.push_back({3, k, -1, pi / 4});
            musd[k] = 1;
            continue;
        }
        if (std::abs(im) < 1e-3) {
            c.mu[k] = Cplx(c.mu[k].real(), 0);
            groups.push_back({3, k, -1, 0.0});
            musd[k] = 1;
            continue;
        }
        int partner = -1;
        for (int l = k + 1; l < m2; ++l) {
            if (musd[l]) continue;
            const Cplx d = c.mu[l] - std::conj(c.mu[k]);
            if (std::hypot(d.real(), std::remainder(d.imag(), pi / 2)) < 1e-6) {
                partner = l;
                break;
            }
        }
        if (partner < 0)
            throw std::runtime_error(
                "configuration is not conjugation-symmetric");
        const int up = im > 0 ? k : partner;
        const int dn = up == k ? partner : k;
        c.mu[dn] = std::conj(c.mu[up]);
        groups.push_back({2, up, dn, 0.0});
        musd[k] = musd[partner] = 1;
    }
    return groups;
}

int packed_size(const std::vector<Group>& groups) {
    int n = 0;
    for (const auto& g : groups) n += g.kind == 0 || g.kind == 2 ? 2 : 1;
    return n;
}

Eigen::VectorXd pack(const RootConfiguration& c,
                     const std::vector<Group>& groups) {
    Eigen::VectorXd u(packed_size(groups));
    int p = 0;
    for (const auto& g : groups) {
        const Cplx z = g.kind <= 1 ? c.lambda[g.a] : c.mu[g.a];
        u[p++] = z.real();
        if (g.kind == 0 || g.kind == 2) u[p++] = z.imag();
    }
    return u;
}

void unpack(RootConfiguration& c, const std::vector<Group>& groups,
            const Eigen::VectorXd& u) {
    int p = 0;
    for (const auto& g : groups) {
        if (g.kind == 0) {
            c.lambda[g.a] = Cplx(u[p], u[p + 1]);
            c.lambda[g.b] = std::conj(c.lambda[g.a]);
            p += 2;
        } else if (g.kind == 2) {
            c.mu[g.a] = Cplx(u[p], u[p + 1]);
            c.mu[g.b] = std::conj(c.mu[g.a]);
            p += 2;
        } else if (g.kind == 1) {
            c.lambda[g.a] = Cplx(u[p++], g.fixed_im);
        } else {
            c.mu[g.a] = Cplx(u[p++], g.fixed_im);
        }
    }
}

// equation index owned by a group's representative root
int group_eq(const Group& g, int m1) { return g.kind <= 1 ? g.a : m1 + g.a; }

Eigen::VectorXd real_residual(const RootConfiguration& c,
                              const std::vector<Group>& groups,
                              const std::vector<Cplx>& res) {
    Eigen::VectorXd r(packed_size(groups));
    int p = 0;
    for (const auto& g : groups) {
        const Cplx z = res[group_eq(g, c.m1())];
        if (g.kind == 0 || g.kind == 2) {
            r[p++] = z.real();
            r[p++] = z.imag();
        } else {
            r[p++] = z.imag();  // real part vanishes identically on the
                                // symmetric manifold
        }
    }
    return r;
}

Eigen::MatrixXd real_jacobian(const RootConfiguration& c,
                              const std::vector<Group>& groups,
                              const Eigen::MatrixXcd& jac) {
    const int m1 = c.m1(), n = packed_size(groups);
    Eigen::MatrixXd out(n, n);
    int col = 0;
    for (const auto& gc : groups) {
        const int ca = gc.kind <= 1 ? gc.a : m1 + gc.a;
        const int cb = gc.kind == 0 ? gc.b : (gc.kind == 2 ? m1 + gc.b : -1);
        const int ndir = gc.kind == 0 || gc.kind == 2 ? 2 : 1;
        for (int d = 0; d < ndir; ++d) {
            // direction 0: both members shift by +1; direction 1: +i / -i
            const Cplx w = d == 0 ? Cplx(1, 0) : Cplx(0, 1);
            Eigen::VectorXcd v = w * jac.col(ca);
            if (cb >= 0) v += std::conj(w) * jac.col(cb);
            int row = 0;
            for (const auto& gr : groups) {
                const Cplx z = v[group_eq(gr, m1)];
                if (gr.kind == 0 || gr.kind == 2) {
                    out(row++, col) = z.real();
                    out(row++, col) = z.imag();
                } else {
                    out(row++, col) = z.imag();
                }
            }
            ++col;
        }
    }
    return out;
}

void finalize(RootConfiguration& c) {
    canonicalize(c);
    const auto raw = raw_residual(c);
    rebase_branch(c, raw);
    c.residual = max_abs(branch_residual(c, raw));
    check_collisions(c);
    classify_tags(c);
}

// capture phase exits once every residual component sits well inside the
// principal band (-pi, pi]; the branch integers frozen there define the state
// roots of physical states are O(1); anything out here is the runaway toward
// the trivial solution at infinity
constexpr double kRootBound = 40.0;
// largest per-component move accepted in one Newton step; keeps the iterate
// from tunnelling through a neighbouring basin while far from the solution
constexpr double kStepClamp = 0.25;

void check_bounds(const RootConfiguration& c) {
    for (const Cplx& z : c.lambda)
        if (std::abs(z.real()) > kRootBound)
            throw std::runtime_error("Bethe root diverged");
    for (const Cplx& w : c.mu)
        if (std::abs(w.real()) > kRootBound)
            throw std::runtime_error("Bethe root diverged");
}

// residual with branch integers re-chosen at this point: continuous across
// log branch cuts, which individual sinh factors cross freely while the
// iterate travels (string members and axis mu-roots make several factors
// exactly real, so the cuts pass through the solution manifold itself)
std::vector<Cplx> rebased_residual(RootConfiguration& c) {
    const auto raw = raw_residual(c);
    rebase_branch(c, raw);
    return branch_residual(c, raw);
}

RootConfiguration newton_full(RootConfiguration c, const SolveOptions& o) {
    canonicalize(c);
    auto res = rebased_residual(c);
    double rn = max_abs(res);
    double best = rn;
    int since_best = 0;
    for (int it = 0; it < o.max_iter; ++it) {
        if (rn <= o.tol) {
            finalize(c);
            return c;
        }
        const int m = c.m1() + c.m2();
        Eigen::VectorXcd rhs(m);
        for (int i = 0; i < m; ++i) rhs[i] = -res[i];
        const Eigen::MatrixXcd jac = complex_jacobian(c);
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(jac);
        // least-squares step when a flat direction makes the system singular
        const Eigen::VectorXcd delta =
            lu.isInvertible()
                ? Eigen::VectorXcd(lu.solve(rhs))
                : Eigen::VectorXcd(jac.completeOrthogonalDecomposition().solve(rhs));
        const double dmax = delta.cwiseAbs().maxCoeff();
        double t = dmax > kStepClamp ? kStepClamp / dmax : 1.0;
        bool accepted = false;
        for (int half = 0; half < 6 && !accepted; ++half, t /= 2) {
            RootConfiguration trial = c;
            for (int i = 0; i < trial.m1(); ++i) trial.lambda[i] += t * delta[i];
            for (int k = 0; k < trial.m2(); ++k)
                trial.mu[k] += t * delta[trial.m1() + k];
            std::vector<Cplx> tres;
            try {
                canonicalize(trial);
                check_bounds(trial);
                tres = rebased_residual(trial);
            } catch (const std::runtime_error&) {
                continue;
            }
            const double tn = max_abs(tres);
            if (tn <= o.tol || tn < rn * 1.05) {
                c = std::move(trial);
                res = std::move(tres);
                rn = tn;
                accepted = true;
            }
        }
        if (!accepted) throw std::runtime_error("Bethe Newton stalled");
        if (rn < best * 0.99) {
            best = rn;
            since_best = 0;
        } else if (++since_best > 15) {
            throw std::runtime_error("Bethe Newton stalled");
        }
    }
    throw std::runtime_error("Bethe Newton did not converge");
}

// Newton iteration holding the Bethe integers fixed (no per-evaluation
// rebase, no band wrapping): steers the iterate to the state selected by
// its integer set instead of by basin of attraction
bool newton_fixed_branch(RootConfiguration& c, const SolveOptions& o) {
    auto res = branch_residual(c, raw_residual(c));
    double rn = max_abs(res);
    double best = rn;
    int since_best = 0;
    for (int it = 0; it < 2 * o.max_iter; ++it) {
        if (rn <= o.tol) return true;
        const int m = c.m1() + c.m2();
        Eigen::VectorXcd rhs(m);
        for (int i = 0; i < m; ++i) rhs[i] = -res[i];
        const Eigen::MatrixXcd jac = complex_jacobian(c);
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(jac);
        const Eigen::VectorXcd delta =
            lu.isInvertible()
                ? Eigen::VectorXcd(lu.solve(rhs))
                : Eigen::VectorXcd(jac.completeOrthogonalDecomposition().solve(rhs));
        const double dmax = delta.cwiseAbs().maxCoeff();
        double t = dmax > kStepClamp ? kStepClamp / dmax : 1.0;
        bool accepted = false;
        for (int half = 0; half < 8 && !accepted; ++half, t /= 2) {
            RootConfiguration trial = c;
            for (int i = 0; i < trial.m1(); ++i) trial.lambda[i] += t * delta[i];
            for (int k = 0; k < trial.m2(); ++k)
                trial.mu[k] += t * delta[trial.m1() + k];
            std::vector<Cplx> tres;
            try {
                check_bounds(trial);
                tres = branch_residual(trial, raw_residual(trial));
            } catch (const std::runtime_error&) {
                continue;
            }
            const double tn = max_abs(tres);
            if (tn <= o.tol || tn < rn * 1.02) {
                c = std::move(trial);
                res = std::move(tres);
                rn = tn;
                accepted = true;
            }
        }
        if (!accepted) return false;
        if (rn < best * 0.995) {
            best = rn;
            since_best = 0;
        } else if (++since_best > 40) {
            return false;
        }
    }
    return false;
}

RootConfiguration newton_symmetric(RootConfiguration c, const SolveOptions& o) {
    const auto groups = detect_groups(c);
    canonicalize(c);
    Eigen::VectorXd u = pack(c, groups);
    unpack(c, groups, u);  // re-impose exact conjugation
    Eigen::VectorXd res = real_residual(c, groups, rebased_residual(c));
    double rn = res.cwiseAbs().maxCoeff();
    double best = rn;
    int since_best = 0;
    for (int it = 0; it < o.max_iter; ++it) {
        if (rn <= o.tol) {
            finalize(c);
            return c;
        }
        const Eigen::MatrixXd jr = real_jacobian(c, groups, complex_jacobian(c));
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jr);
        const Eigen::VectorXd delta =
            lu.isInvertible()
                ? Eigen::VectorXd(lu.solve(-res))
                : Eigen::VectorXd(jr.completeOrthogonalDecomposition().solve(-res));
        const double dmax = delta.cwiseAbs().maxCoeff();
        double t = dmax > kStepClamp ? kStepClamp / dmax : 1.0;
        bool accepted = false;
        for (int half = 0; half < 6 && !accepted; ++half, t /= 2) {
            RootConfiguration trial = c;
            unpack(trial, groups, Eigen::VectorXd(u + t * delta));
            Eigen::VectorXd tres;
            try {
                canonicalize(trial);
                check_bounds(trial);
                tres = real_residual(trial, groups, rebased_residual(trial));
            } catch (const std::runtime_error&) {
                continue;
            }
            const double tn = tres.cwiseAbs().maxCoeff();
            if (tn <= o.tol || tn < rn * 1.05) {
                c = std::move(trial);
                u = pack(c, groups);
                res = std::move(tres);
                rn = tn;
                accepted = true;
            }
        }
        if (!accepted) throw std::runtime_error("Bethe Newton stalled");
        if (rn < best * 0.99) {
            best = rn;
            since_best = 0;
        } else if (++since_best > 15) {
            throw std::runtime_error("Bethe Newton stalled");
        }
    }
    throw std::runtime_error("Bethe Newton did not converge");
}

}  // namespace

std::string StateLabel::name() const {
    std::string s = "(" + std::to_string(n1) + "," + std::to_string(n2) + "," +
                    std::to_string(j) + ")";
    if (primed) s += "'";
    return s;
}

int root_count_m1(int L, const StateLabel& s) { return L - s.n1 - s.n2; }
int root_count_m2(int L, const StateLabel& s) { return L / 2 - s.n2; }

RootConfiguration seed_state(int L, const StateLabel& label, double gamma,
                             double phi1, double phi2) {
    if (L < 2 || L % 2 != 0)
        throw std::invalid_argument("size must be even and positive");
    if (label.n1 < 0 || label.n2 < 0 || label.j < 0)
        throw std::invalid_argument("state label indices must be nonnegative");
    if (label.primed && (label.n2 != 0 || label.j != 0 || label.n1 < 1))
        throw std::invalid_argument(
            "primed states are labeled (n1,0,0)' with n1 >= 1");
    const int m1 = root_count_m1(L, label), m2 = root_count_m2(L, label);
    const int n2strings = L / 2 - label.n1 - label.j;
    const int naxis = label.n1 - label.n2;
    if (m1 < 0 || m2 < 0 || n2strings < 0 || naxis < 0)
        throw std::invalid_argument("state label not realizable at this size");

    RootConfiguration c;
    c.L = L;
    c.gamma = gamma;
    c.phi1 = phi1;
    c.phi2 = phi2;
    c.state = label;
    const double y2 = pi / 4 - gamma / 2;
    // sea spacing and string width fitted to converged small-size ground
    // states; the solver absorbs the remaining seed error
    const double h = std::clamp(0.83 / L + 0.077, 0.08, 0.6);
    const double ystr = y2 - 0.135 * gamma;
    double edge = 0.6;
    std::vector<double> string_x;
    for (int i = 0; i < n2strings; ++i) {
        const double x = h * (i - 0.5 * (n2strings - 1));
        string_x.push_back(x);
        c.lambda.push_back(Cplx(x, ystr));
        c.lambda.push_back(Cplx(x, -ystr));
        edge = std::max(edge, x + h);
    }
    if (!label.primed) {
        // the pi/2 axis carries n1-n2 roots plus j antistring pairs: a
        // center singleton when the count is odd, mirrored pairs walking
        // outward from the sea edge otherwise
        if (naxis % 2 == 1) c.lambda.push_back(Cplx(0.11, pi / 2));
        for (int m = 0; m < naxis / 2 + label.j; ++m) {
            const double x = edge + h * m;
            c.lambda.push_back(Cplx(x, pi / 2));
            c.lambda.push_back(Cplx(-x, pi / 2));
        }
    } else {
        // large-twist pattern: floor(n1/2) conjugate pairs off the real axis
        // plus one real root when n1 is odd; seeded away from the exact
        // +-gamma/2 string axis to stay clear of the internal sinh pole.
        // odd-n1 pairs sit past the sea edge, even-n1 pairs near the center
        // (they tighten toward the real axis as the iteration proceeds)
        const int nstar = label.n1 / 2;
        for (int m = 0; m < nstar; ++m) {
            const double x = label.n1 % 2 == 1 ? edge + h * m : h * m;
            const double y = label.n1 % 2 == 1 ? 0.425 * gamma : 0.4 * gamma;
            c.lambda.push_back(Cplx(x, y));
            c.lambda.push_back(Cplx(x, -y));
        }
        if (label.n1 % 2 == 1)
            c.lambda.push_back(Cplx(edge + h * nstar + 0.19, 0));
    }
    // one mu root rides on each 2-string (the string-width deviation keeps
    // the sinh(2(lambda-mu)+i*gamma) factor off its zero); an odd extra
    // starts at the sea edge (seeding it dead center funnels Newton into a
    // collided double root), and even extras form wide mirrored pairs off
    // the pi/4 line whose positions are nearly flat directions
    for (double x : string_x) c.mu.push_back(Cplx(x, pi / 4));
    const int nextra = m2 - n2strings;
    if (nextra % 2 == 1) c.mu.push_back(Cplx(edge, pi / 4));
    for (int t = 0; t < nextra / 2; ++t) {
        const double far = 5.0 + 0.8 * t;
        c.mu.push_back(Cplx(far, -0.3));
        c.mu.push_back(Cplx(-far, 0.3));
    }

    rebase_branch(c, raw_residual(c));
    c.residual = max_abs(branch_residual(c, raw_residual(c)));
    classify_tags(c);
    return c;
}

std::vector<Cplx> bae_residual(const RootConfiguration& cfg) {
    RootConfiguration c = cfg;
    const auto raw = raw_residual(c);
    if (int(c.branch.size()) != c.m1() + c.m2()) rebase_branch(c, raw);
    return branch_residual(c, raw);
}

RootConfiguration newton_solve(const RootConfiguration& seed,
                               const SolveOptions& opts) {
    return opts.symmetric ? newton_symmetric(seed, opts)
                          : newton_full(seed, opts);
}

RootConfiguration solve_state(int L, const StateLabel& label, double gamma,
                              double phi1, double phi2,
                              const SolveOptions& opts) {
    SolveOptions o = opts;
    const bool zero_twist = std::abs(phi1) < 1e-14 && std::abs(phi2) < 1e-14;
    o.symmetric = zero_twist && !label.primed;
    std::mt19937 rng(0x9e3779b9u ^ unsigned(L) ^ (unsigned(label.n1) << 8) ^
                     (unsigned(label.n2) << 12) ^ (unsigned(label.j) << 16));
    for (int attempt = 0;; ++attempt) {
        try {
            SolveOptions oa = o;
            RootConfiguration seed = seed_state(L, label, gamma, phi1, phi2);
            if (oa.symmetric) {
                // states with off-line mu pairs are conjugation-asymmetric
                // from the start; the constrained solver cannot reach them
                RootConfiguration g = seed;
                try {
                    detect_groups(g);
                } catch (const std::runtime_error&) {
                    oa.symmetric = false;
                    o.symmetric = false;
                }
            }
            if (attempt > 0) {
                // tiny jitter first (collision rescue, stays within the
                // conjugation-matching tolerance), then coarse basin
                // exploration in the unconstrained solver
                if (attempt >= 3) oa.symmetric = false;
                const double amp = oa.symmetric || attempt <= 2 ? 1e-8 : 2e-2;
                std::uniform_real_distribution<double> jit(-amp, amp);
                for (auto& z : seed.lambda) z += Cplx(jit(rng), jit(rng));
                for (auto& w : seed.mu) w += Cplx(jit(rng), jit(rng));
                rebase_branch(seed, raw_residual(seed));
            }
            if (!label.primed) return newton_solve(seed, oa);
            // a primed state shares its root pattern with nearby unprimed
            // states and differs only by its Bethe integers: for odd n1,
            // lower the integer of every equation attached to a root outside
            // the 2-string sea and iterate with the whole set held fixed;
            // for even n1 the seed's own integers already select the state
            oa.symmetric = false;
            rebase_branch(seed, raw_residual(seed));
            if (label.n1 % 2 == 1) {
                for (int i = 2 * (L / 2 - label.n1); i < seed.m1(); ++i)
                    seed.branch[i] -= 1;
                if (!newton_fixed_branch(seed, oa))
                    throw std::runtime_error("primed-state iteration stalled");
            } else {
                try {
                    seed = newton_solve(seed, oa);
                } catch (const std::runtime_error&) {
                    if (!newton_fixed_branch(seed, oa)) {
                        if (zero_twist)
                            throw std::runtime_error(
                                "primed-state iteration stalled");
                        // the twisted basin resists direct seeding: walk
                        // the zero-twist solution along the twist path
                        auto base =
                            solve_state(L, label, gamma, 0.0, 0.0, opts);
                        auto path = continue_twist(base, phi1, phi2, opts);
                        if (path.blocked || path.configs.empty())
                            throw std::runtime_error(
                                "primed-state iteration stalled");
                        return path.configs.back();
                    }
                }
            }
            finalize(seed);
            if (zero_twist &&
                std::arg(translation_phase_from_roots(seed)) < 0) {
                // report the +1 momentum member of the doublet; the two
                // members are mirror images under x -> -x
                for (auto& z : seed.lambda) z = -std::conj(z);
                for (auto& w : seed.mu) w = -std::conj(w);
                finalize(seed);
            }
            return seed;
        } catch (const std::runtime_error&) {
            if (attempt >= 4) throw;
        }
    }
}

Cplx energy_sum_from_roots(const RootConfiguration& cfg) {
    Cplx e = 0;
    for (const Cplx& z : cfg.lambda)
        e += std::sin(cfg.gamma) / (std::cosh(2.0 * z) - std::cos(cfg.gamma));
    return e;
}

double energy_from_roots(const RootConfiguration& cfg, int sign) {
    return sign * energy_sum_from_roots(cfg).real();
}

Cplx translation_phase_from_roots(const RootConfiguration& cfg) {
    // oriented to agree with the lattice one-site translation operator:
    // its eigenvalue is the inverse of the transfer-direction phase
    const Cplx ig2(0, cfg.gamma / 2);
    Cplx num = 1, den = 1;
    for (const Cplx& z : cfg.lambda) {
        num *= std::sinh(-ig2 - z);
        den *= std::sinh(ig2 - z);
    }
    if (std::abs(den) < 1e-12)
        throw std::runtime_error("degenerate configuration: Q(i g/2) = 0");
    const Cplx phase = std::exp(Cplx(0, -cfg.phi1 - cfg.phi2)) * num / den;
    return phase / std::abs(phase);
}

ContinuationResult continue_twist(const RootConfiguration& start,
                                  double phi1_to, double phi2_to,
                                  const SolveOptions& opts) {
    SolveOptions o = opts;
    o.symmetric = false;
    ContinuationResult out;
    const double d1 = phi1_to - start.phi1, d2 = phi2_to - start.phi2;
    const double span = std::max(std::abs(d1), std::abs(d2));
    if (span < 1e-15) {
        out.configs.push_back(newton_solve(start, o));
        return out;
    }
    const double dt0 = 0.05 / span;  // initial twist increment 0.05
    RootConfiguration cur = start;
    double t = 0, dt = std::min(1.0, dt0);
    int streak = 0;
    while (t < 1 - 1e-12) {
        const double tn = std::min(1.0, t + dt);
        RootConfiguration trial = cur;
        trial.phi1 = start.phi1 + tn * d1;
        trial.phi2 = start.phi2 + tn * d2;
        try {
            rebase_branch(trial, raw_residual(trial));
            trial = newton_solve(trial, o);
            cur = trial;
            t = tn;
            out.configs.push_back(cur);
            if (++streak >= 2) {
                dt = std::min(dt * 2, dt0);
                streak = 0;
            }
        } catch (const std::runtime_error&) {
            dt /= 2;
            streak = 0;
            if (dt * span < 1e-4) {
                out.blocked = true;
                return out;
            }
        }
    }
    return out;
}

ContinuationResult l_ladder(const RootConfiguration& start, int L_to,
                            const SolveOptions& opts) {
    SolveOptions o = opts;
    ContinuationResult out;
    RootConfiguration cur = start;
    out.configs.push_back(cur);
    const bool zero_twist =
        std::abs(cur.phi1) < 1e-14 && std::abs(cur.phi2) < 1e-14;
    while (cur.L < L_to) {
        if (cur.state.primed) {
            // integer-steered states are re-solved per size; growing the sea
            // under a rebasing iteration would slip back to the parent state
            try {
                cur = solve_state(cur.L + 2, cur.state, cur.gamma, cur.phi1,
                                  cur.phi2, o);
            } catch (const std::runtime_error&) {
                out.blocked = true;
                return out;
            }
            out.configs.push_back(cur);
            continue;
        }
        RootConfiguration next = cur;
        next.L += 2;
        // locate the 2-string sea to pick the insertion edge and spacing
        std::vector<double> centers;
        double ybar = pi / 4 - cur.gamma / 2;
        double ysum = 0;
        int nup = 0;
        for (int i = 0; i < cur.m1(); ++i)
            if (cur.tags[i] == RootTag::TwoString && cur.lambda[i].imag() > 0) {
                centers.push_back(cur.lambda[i].real());
                ysum += cur.lambda[i].imag();
                ++nup;
            }
        std::sort(centers.begin(), centers.end());
        double h = 0.4;
        if (centers.size() >= 2) {
            std::vector<double> gaps;
            for (size_t i = 1; i < centers.size(); ++i)
                gaps.push_back(centers[i] - centers[i - 1]);
            std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2,
                             gaps.end());
            h = gaps[gaps.size() / 2];
        }
        if (nup > 0) ybar = ysum / nup;
        bool grown = false;
        for (int side = 0; side < 2 && !grown; ++side) {
            // append at one sea edge, then translate everything so the
            // string center of mass stays put: the enlarged sea then relaxes
            // in place instead of marching sideways into collisions
            const double edge = centers.empty()
                                    ? 0.6
                                    : (side == 0 ? centers.back() + h
                                                 : centers.front() - h);
            RootConfiguration trial = next;
            trial.lambda.push_back(Cplx(edge, ybar));
            trial.lambda.push_back(Cplx(edge, -ybar));
            // the new mu rides on the inserted string like the rest of the sea
            trial.mu.push_back(Cplx(edge, pi / 4));
            if (!centers.empty()) {
                double m_old = 0;
                for (double x : centers) m_old += x;
                const double shift =
                    (m_old + edge) / (centers.size() + 1) -
                    m_old / centers.size();
                for (auto& z : trial.lambda) z -= shift;
                for (auto& w : trial.mu) w -= shift;
            }
            try {
                rebase_branch(trial, raw_residual(trial));
                SolveOptions so = o;
                so.symmetric = zero_twist && !cur.state.primed;
                next = newton_solve(trial, so);
                grown = true;
            } catch (const std::runtime_error&) {
            }
        }
        if (!grown) {
            // both edges failed: fall back to an independent solve
            try {
                next = solve_state(cur.L + 2, cur.state, cur.gamma, cur.phi1,
                                   cur.phi2, o);
                grown = true;
            } catch (const std::runtime_error&) {
                out.blocked = true;
                return out;
            }
        }
        cur = next;
        out.configs.push_back(cur);
    }
    return out;
}

std::string root_archive_json(const RootConfiguration& cfg) {
    nlohmann::json j;
    j["L"] = cfg.L;
    j["gamma"] = cfg.gamma;
    j["phi1"] = cfg.phi1;
    j["phi2"] = cfg.phi2;
    j["state"] = {cfg.state.n1, cfg.state.n2, cfg.state.j, cfg.state.primed};
    j["m1"] = cfg.m1();
    j["m2"] = cfg.m2();
    auto pairs = [](const std::vector<Cplx>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const Cplx& z : v) a.push_back({z.real(), z.imag()});
        return a;
    };
    j["lambda"] = pairs(cfg.lambda);
    j["mu"] = pairs(cfg.mu);
    j["energy"] = energy_from_roots(cfg);
    j["residual"] = cfg.residual;
    j["branch_integers"] = cfg.branch;
    return j.dump(2);
}

RootConfiguration root_archive_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    RootConfiguration c;
    c.L = j.at("L").get<int>();
    c.gamma = j.at("gamma").get<double>();
    c.phi1 = j.at("phi1").get<double>();
    c.phi2 = j.at("phi2").get<double>();
    c.state.n1 = j.at("state")[0].get<int>();
    c.state.n2 = j.at("state")[1].get<int>();
    c.state.j = j.at("state")[2].get<int>();
    c.state.primed = j.at("state")[3].get<bool>();
    for (const auto& p : j.at("lambda"))
        c.lambda.push_back(Cplx(p[0].get<double>(), p[1].get<double>()));
    for (const auto& p : j.at("mu"))
        c.mu.push_back(Cplx(p[0].get<double>(), p[1].get<double>()));
    c.branch = j.at("branch_integers").get<std::vector<int>>();
    c.residual = j.at("residual").get<double>();
    classify_tags(c);
    return c;
}

}  // namespace cpotts
