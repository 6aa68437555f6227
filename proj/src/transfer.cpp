#include "cpotts/transfer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cpotts/linalg.hpp"

namespace cpotts {

namespace {

// Aux-line hop operators of R = P Rcheck: amp[s_out][s_in](a_out, a_in) is
// the R element with row pair (a_out, s_out) and column pair (a_in, s_in),
// i.e. Rcheck(4 s_out + a_out, 4 a_in + s_in).  At lambda = 0 this collapses
// to a(0) |s_in><s_out|, which is what makes T(0) a one-site shift.
struct SiteOps {
    Eigen::Matrix4cd amp[4][4];
};

SiteOps site_ops(const Eigen::MatrixXcd& rcheck) {
    SiteOps ops;
    for (int so = 0; so < 4; ++so)
        for (int si = 0; si < 4; ++si)
            for (int ao = 0; ao < 4; ++ao)
                for (int ai = 0; ai < 4; ++ai)
                    ops.amp[so][si](ao, ai) = rcheck(4 * so + ao, 4 * ai + si);
    return ops;
}

std::array<Cplx, 4> twist_diag(double phi1, double phi2) {
    std::array<Cplx, 4> tau;
    for (int a = 0; a < 4; ++a)
        tau[a] = std::exp(
            Cplx(0, -2.0 * (phi1 * spin_of(a, 1) + phi2 * spin_of(a, 2))));
    return tau;
}

void check_dense_size(const SectorBasis& basis, int dense_cap) {
    if (basis.sector.L > dense_cap)
        throw std::invalid_argument("transfer: L exceeds the dense-storage cap");
    if (basis.dim() == 0) throw std::invalid_argument("transfer: empty sector");
    if (basis.dim() > 12000)
        throw std::invalid_argument("transfer: sector too large for dense storage");
}

// Column-by-column contraction of the auxiliary trace.  For each input
// configuration a DFS over output digits carries the 4x4 auxiliary frontier
// (and optionally its lambda-derivative) across the row; branches die when
// the colour imbalance exceeds the one-unit transport capacity of the aux
// line or cannot reach the sector magnetisation in the remaining sites.
void contract(const SectorBasis& basis, Cplx lambda, double gamma,
              Eigen::MatrixXcd* value, Eigen::MatrixXcd* deriv) {
    const SectorLabel& sec = basis.sector;
    const int L = sec.L, n = basis.dim();
    const SiteOps ops = site_ops(vertex_rcheck(lambda, gamma));
    SiteOps dops;
    if (deriv) dops = site_ops(vertex_rcheck_dlambda(lambda, gamma));
    const auto tau = twist_diag(sec.phi1, sec.phi2);
    if (value) value->setZero(n, n);
    if (deriv) deriv->setZero(n, n);

    std::array<int, 32> in_digit{};
    std::array<int, 33> in1{}, in2{};  // colour-up prefix counts of the input

    struct Walker {
        const SectorBasis& basis;
        const SiteOps& ops;
        const SiteOps& dops;
        const std::array<Cplx, 4>& tau;
        Eigen::MatrixXcd* value;
        Eigen::MatrixXcd* deriv;
        const std::array<int, 32>& in_digit;
        const std::array<int, 33>& in1;
        const std::array<int, 33>& in2;
        int L, up1, up2, col;

        void walk(int p, const Eigen::Matrix4cd& f, const Eigen::Matrix4cd& fd,
                  std::uint64_t out_code, int o1, int o2) {
            if (p == L) {
                const int row = basis.index_of(out_code);
                if (row < 0) throw std::logic_error("transfer: image left the sector");
                Cplx tv = 0, td = 0;
                for (int a = 0; a < 4; ++a) {
                    tv += tau[a] * f(a, a);
                    if (deriv) td += tau[a] * fd(a, a);
                }
                if (value) (*value)(row, col) = tv;
                if (deriv) (*deriv)(row, col) = td;
                return;
            }
            const int rest = L - p - 1;
            for (int od = 0; od < 4; ++od) {
                const int no1 = o1 + ((od >> 1) & 1), no2 = o2 + (od & 1);
                if (no1 > up1 || no1 + rest < up1) continue;
                if (no2 > up2 || no2 + rest < up2) continue;
                if (std::abs(no1 - in1[p + 1]) > 1) continue;
                if (std::abs(no2 - in2[p + 1]) > 1) continue;
                const Eigen::Matrix4cd& a = ops.amp[od][in_digit[p]];
                const Eigen::Matrix4cd fn = a * f;
                Eigen::Matrix4cd fdn;
                bool alive = fn.cwiseAbs().maxCoeff() > 0;
                if (deriv) {
                    fdn = dops.amp[od][in_digit[p]] * f + a * fd;
                    alive = alive || fdn.cwiseAbs().maxCoeff() > 0;
                }
                if (!alive) continue;
                walk(p + 1, fn, deriv ? fdn : fd, out_code * 4 + od, no1, no2);
            }
        }
    };

    Walker w{basis, ops,      dops, tau, value, deriv, in_digit,
             in1,   in2,      L,    sec.up1, sec.up2, 0};
    for (int col = 0; col < n; ++col) {
        const std::uint64_t code = basis.states[col];
        for (int i = 0; i < L; ++i) {
            in_digit[i] = site_digit(code, i, L);
            in1[i + 1] = in1[i] + ((in_digit[i] >> 1) & 1);
            in2[i + 1] = in2[i] + (in_digit[i] & 1);
        }
        w.col = col;
        w.walk(0, Eigen::Matrix4cd::Identity(), Eigen::Matrix4cd::Zero(), 0, 0, 0);
    }
}

// Overall energy normalization i/2, sign fixed empirically: with the i the
// transfer log-derivative maps Bethe configurations to the real kernel
// sum_i sin(gamma)/(cosh 2 lambda_i - cos gamma), the 1/2 matches the Fermi
// velocity pi/(pi - 4 gamma) (central charge from twisted ground states at
// k = 4 extrapolates to +8/5, not twice or minus that), and the + sign puts
// the antiferromagnetic ground state at the bottom of the spectrum.
constexpr Cplx kEnergyPrefactor{0.0, 0.5};

}  // namespace

Eigen::MatrixXcd build_transfer(const SectorBasis& basis, Cplx lambda,
                                double gamma, int dense_cap) {
    check_dense_size(basis, dense_cap);
    Eigen::MatrixXcd t;
    contract(basis, lambda, gamma, &t, nullptr);
    return t;
}

TransferPair build_transfer_with_deriv(const SectorBasis& basis, Cplx lambda,
                                       double gamma, int dense_cap) {
    check_dense_size(basis, dense_cap);
    TransferPair tp;
    contract(basis, lambda, gamma, &tp.value, &tp.deriv);
    return tp;
}

ShiftOp translation_op(const SectorBasis& basis, double gamma) {
    if (basis.dim() == 0) throw std::invalid_argument("transfer: empty sector");
    const SectorLabel& sec = basis.sector;
    const auto tau = twist_diag(sec.phi1, sec.phi2);
    (void)gamma;
    ShiftOp g;
    g.dim = basis.dim();
    g.dest.resize(g.dim);
    g.phase.resize(g.dim);
    for (int j = 0; j < g.dim; ++j) {
        const std::uint64_t code = basis.states[j];
        const int row = basis.index_of(rotate_right(code, sec.L));
        if (row < 0) throw std::logic_error("transfer: rotation left the sector");
        g.dest[j] = row;
        g.phase[j] = tau[site_digit(code, sec.L - 1, sec.L)];
    }
    return g;
}

std::vector<MomentumBlock> momentum_blocks(const ShiftOp& g) {
    const int n = g.dim;
    struct Fam {
        Cplx mu;
        std::vector<std::pair<int, Cplx>> col;
    };
    std::vector<Fam> fams;
    std::vector<char> seen(n, 0);
    for (int s0 = 0; s0 < n; ++s0) {
        if (seen[s0]) continue;
        std::vector<int> orbit;
        std::vector<Cplx> hop;
        for (int s = s0; !seen[s]; s = g.dest[s]) {
            seen[s] = 1;
            orbit.push_back(s);
            hop.push_back(g.phase[s]);
        }
        const int d = int(orbit.size());
        Cplx around = 1.0;
        for (const Cplx& u : hop) around *= u;
        const Cplx root = std::exp(std::log(around) / double(d));
        for (int r = 0; r < d; ++r) {
            const Cplx mu =
                root * std::exp(Cplx(0, 2.0 * std::numbers::pi * r / d));
            std::vector<std::pair<int, Cplx>> col(d);
            Cplx c = 1.0 / std::sqrt(double(d));
            for (int m = 0; m < d; ++m) {
                col[m] = {orbit[m], c};
                c *= hop[m] / mu;
            }
            fams.push_back({mu, std::move(col)});
        }
    }
    // Group families sharing mu (tolerance well below any twist-phase gap).
    std::sort(fams.begin(), fams.end(), [](const Fam& x, const Fam& y) {
        const double ax = std::arg(x.mu), ay = std::arg(y.mu);
        if (ax != ay) return ax < ay;
        return x.col[0].first < y.col[0].first;
    });
    std::vector<MomentumBlock> blocks;
    for (auto& f : fams) {
        if (!blocks.empty() && std::abs(blocks.back().mu - f.mu) < 1e-9)
            blocks.back().columns.push_back(std::move(f.col));
        else
            blocks.push_back({f.mu, {std::move(f.col)}});
    }
    // arg wraps at +-pi: the first and last cluster may be the same mu.
    if (blocks.size() > 1 && std::abs(blocks.front().mu - blocks.back().mu) < 1e-9) {
        for (auto& c : blocks.back().columns)
            blocks.front().columns.push_back(std::move(c));
        blocks.pop_back();
    }
    return blocks;
}

Eigen::MatrixXcd restrict_to_block(const Eigen::MatrixXcd& op,
                                   const MomentumBlock& b) {
    const int m = b.dim();
    Eigen::MatrixXcd out(m, m);
    Eigen::VectorXcd y(op.rows());
    for (int j = 0; j < m; ++j) {
        y.setZero();
        for (const auto& [idx, co] : b.columns[j]) y += co * op.col(idx);
        for (int i = 0; i < m; ++i) {
            Cplx s = 0;
            for (const auto& [idx, co] : b.columns[i]) s += std::conj(co) * y(idx);
            out(i, j) = s;
        }
    }
    return out;
}

Eigen::MatrixXcd build_hamiltonian(const SectorBasis& basis, double gamma,
                                   int dense_cap) {
    check_dense_size(basis, dense_cap);
    const SectorLabel& sec = basis.sector;
    const int L = sec.L, n = basis.dim();
    const ShiftOp g = translation_op(basis, gamma);
    Eigen::MatrixXcd tp;
    contract(basis, Cplx(0, 0), gamma, nullptr, &tp);  // T'(0)

    std::vector<int> src(n);  // src[j]: column of G^{-1}'s single entry in row j
    for (int m = 0; m < n; ++m) src[g.dest[m]] = m;

    const Cplx a0 = vertex_weights(Cplx(0, 0), gamma).a;
    const Cplx a_pow_inv = 1.0 / std::pow(a0, double(L));
    const Cplx pref = kEnergyPrefactor;

    Eigen::MatrixXcd h(n, n);
    for (int j = 0; j < n; ++j)
        h.col(j) = (pref * a_pow_inv * std::conj(g.phase[src[j]])) * tp.col(src[j]);
    h.diagonal().array() -= pref * double(L) * rcheck_log_deriv_const(gamma);
    return h;
}

namespace {

// Eigen-decomposes one block of H and attaches the transfer eigenvalue of
// each level; clusters of degenerate energies are re-diagonalized inside
// their eigenspace so every Lambda is well defined.
void block_levels(const Eigen::MatrixXcd& hb, const Eigen::MatrixXcd& tb,
                  double phase, std::vector<Cplx>& lams,
                  std::vector<double>& es, std::vector<double>& ps) {
    const int m = int(hb.rows());
    EigenSystem sys = dense_eigensystem(hb);
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return sys.values[x].real() < sys.values[y].real();
    });
    int i = 0;
    while (i < m) {
        int j = i + 1;
        const double scale = 1.0 + std::abs(sys.values[order[i]]);
        while (j < m && std::abs(sys.values[order[j]] - sys.values[order[j - 1]]) <
                            1e-9 * scale)
            ++j;
        if (j - i == 1) {
            const auto v = sys.vectors.col(order[i]);
            const Eigen::VectorXcd tv = tb * v;
            int at = 0;
            v.cwiseAbs().maxCoeff(&at);
            lams.push_back(tv(at) / v(at));
            es.push_back(sys.values[order[i]].real());
            ps.push_back(phase);
        } else {
            Eigen::MatrixXcd b(m, j - i);
            for (int c = i; c < j; ++c) b.col(c - i) = sys.vectors.col(order[c]);
            const Eigen::MatrixXcd y =
                b.colPivHouseholderQr().solve(tb * b);
            std::vector<Cplx> sub = dense_eigenvalues(y);
            sort_spectrum(sub);
            for (int c = i; c < j; ++c) {
                lams.push_back(sub[c - i]);
                es.push_back(sys.values[order[c]].real());
                ps.push_back(phase);
            }
        }
        i = j;
    }
}

}  // namespace

SpectrumRecord sector_spectrum(const SectorBasis& basis, Cplx lambda,
                               double gamma, int count, int dense_cap) {
    check_dense_size(basis, dense_cap);
    const ShiftOp g = translation_op(basis, gamma);
    const Eigen::MatrixXcd h = build_hamiltonian(basis, gamma, dense_cap);
    const Eigen::MatrixXcd t = build_transfer(basis, lambda, gamma, dense_cap);
    std::vector<Cplx> lams;
    std::vector<double> es, ps;
    for (const MomentumBlock& b : momentum_blocks(g)) {
        const Eigen::MatrixXcd hb = restrict_to_block(h, b);
        const Eigen::MatrixXcd tb = restrict_to_block(t, b);
        block_levels(hb, tb, std::arg(b.mu), lams, es, ps);
    }
    std::vector<int> order(lams.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        const double ax = std::abs(lams[x]), ay = std::abs(lams[y]);
        if (ax != ay) return ax > ay;
        if (lams[x].real() != lams[y].real())
            return lams[x].real() > lams[y].real();
        return lams[x].imag() > lams[y].imag();
    });
    SpectrumRecord rec;
    rec.sector = basis.sector;
    const int keep =
        count < 0 ? int(order.size()) : std::min<int>(count, int(order.size()));
    for (int i = 0; i < keep; ++i) {
        rec.eigenvalues.push_back(lams[order[i]]);
        rec.energies.push_back(es[order[i]]);
        rec.momenta.push_back(ps[order[i]]);
    }
    return rec;
}

std::vector<Cplx> transfer_spectrum(const SectorBasis& basis, Cplx lambda,
                                    double gamma, int dense_cap) {
    check_dense_size(basis, dense_cap);
    const ShiftOp g = translation_op(basis, gamma);
    const Eigen::MatrixXcd t = build_transfer(basis, lambda, gamma, dense_cap);
    std::vector<Cplx> out;
    for (const MomentumBlock& b : momentum_blocks(g)) {
        const std::vector<Cplx> sub = dense_eigenvalues(restrict_to_block(t, b));
        out.insert(out.end(), sub.begin(), sub.end());
    }
    sort_spectrum(out);
    return out;
}

}  // namespace cpotts
