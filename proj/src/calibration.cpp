#include "ghost_spectra/calibration.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gs {

namespace {

using std::complex;

struct Node {
    cplx z;
    cplx w;  // complex quadrature weight, segment direction included
};

// Gauss-Legendre nodes mapped onto a straight segment from a to b.
void append_segment(std::vector<Node>& nodes, cplx a, cplx b, int order) {
    const auto& [x, w] = gauss_legendre(order);
    const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < x.size(); ++k)
        nodes.push_back({mid + half * x[k], half * w[k]});
}

// Upper half of the contour, traversed counterclockwise: up the right edge,
// across the top, down the left edge.
std::vector<Node> upper_path(const ContourSpec& c) {
    std::vector<Node> nodes;
    nodes.reserve(3 * static_cast<std::size_t>(c.nodes_per_side));
    const cplx iv(0.0, c.v0);
    append_segment(nodes, cplx(c.x_r, 0.0), cplx(c.x_r, 0.0) + iv, c.nodes_per_side);
    append_segment(nodes, cplx(c.x_r, 0.0) + iv, cplx(c.x_l, 0.0) + iv, c.nodes_per_side);
    append_segment(nodes, cplx(c.x_l, 0.0) + iv, cplx(c.x_l, 0.0), c.nodes_per_side);
    return nodes;
}

// Full contour, counterclockwise, with the vertical edges split at the real
// axis so no node lands on it.
std::vector<Node> closed_path(const ContourSpec& c) {
    std::vector<Node> nodes;
    nodes.reserve(6 * static_cast<std::size_t>(c.nodes_per_side));
    const cplx iv(0.0, c.v0);
    const cplx zr(c.x_r, 0.0), zl(c.x_l, 0.0);
    append_segment(nodes, zr, zr + iv, c.nodes_per_side);
    append_segment(nodes, zr + iv, zl + iv, c.nodes_per_side);
    append_segment(nodes, zl + iv, zl, c.nodes_per_side);
    append_segment(nodes, zl, zl - iv, c.nodes_per_side);
    append_segment(nodes, zl - iv, zr - iv, c.nodes_per_side);
    append_segment(nodes, zr - iv, zr, c.nodes_per_side);
    return nodes;
}

// integral u^2 t^2 / (1 + t u)^2 dH and t^2 / (1 + t u)^3 dH
cplx int_u2t2(const DiscreteLaw& H, cplx u) {
    cplx s = 0.0;
    for (std::size_t a = 0; a < H.atoms.size(); ++a) {
        const cplx d = 1.0 + H.atoms[a] * u;
        s += H.weights[a] * u * u * H.atoms[a] * H.atoms[a] / (d * d);
    }
    return s;
}

cplx int_t2_cube(const DiscreteLaw& H, cplx u) {
    cplx s = 0.0;
    for (std::size_t a = 0; a < H.atoms.size(); ++a) {
        const cplx d = 1.0 + H.atoms[a] * u;
        s += H.weights[a] * H.atoms[a] * H.atoms[a] / (d * d * d);
    }
    return s;
}

// Truncated Laurent series: coefficient a[k] multiplies u^{lo+k}.
struct Laurent {
    int lo = 0;
    std::vector<double> a;
};

Laurent laurent_mul(const Laurent& s, const Laurent& t, int keep) {
    Laurent r;
    r.lo = s.lo + t.lo;
    r.a.assign(static_cast<std::size_t>(keep), 0.0);
    for (std::size_t i = 0; i < s.a.size(); ++i) {
        if (s.a[i] == 0.0) continue;
        for (std::size_t j = 0; j < t.a.size() && i + j < static_cast<std::size_t>(keep); ++j)
            r.a[i + j] += s.a[i] * t.a[j];
    }
    return r;
}

void laurent_add_const(Laurent& s, double v) {
    const int idx = -s.lo;  // position of u^0
    if (idx < 0 || idx >= static_cast<int>(s.a.size()))
        throw std::logic_error("laurent window too small for constant term");
    s.a[static_cast<std::size_t>(idx)] += v;
}

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("quadrature order must be positive");
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;

    std::vector<double> x(static_cast<std::size_t>(order)), w(static_cast<std::size_t>(order));
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on P_order.
        double t = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -t;
        x[static_cast<std::size_t>(order - 1 - i)] = t;
        const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(order - 1 - i)] = wi;
    }
    return cache.emplace(order, std::make_pair(std::move(x), std::move(w))).first->second;
}

ContourSpec ContourSpec::around(double c, const DiscreteLaw& H, double margin,
                                double v0, int nodes_per_side) {
    if (!(margin > 0.0)) throw std::invalid_argument("contour margin must be positive");
    if (!(v0 > 0.0)) throw std::invalid_argument("contour height must be positive");
    const auto [lo, hi] = support_interval(c, H);
    ContourSpec spec;
    spec.x_l = lo - margin;
    spec.x_r = hi + margin;
    spec.v0 = v0;
    spec.nodes_per_side = nodes_per_side;
    return spec;
}

void ContourSpec::validate_encloses(double c, const DiscreteLaw& H) const {
    const auto [lo, hi] = support_interval(c, H);
    if (!(x_l < lo && hi < x_r))
        throw std::invalid_argument("contour does not enclose the support interval");
    if (!(v0 > 0.0) || nodes_per_side < 8)
        throw std::invalid_argument("degenerate contour");
}

std::pair<ContourSpec, ContourSpec> nested_contours(double c, const DiscreteLaw& H,
                                                    int nodes_per_side) {
    ContourSpec inner = ContourSpec::around(c, H, 0.35, 0.55, nodes_per_side);
    ContourSpec outer = ContourSpec::around(c, H, 0.60, 0.80, nodes_per_side);
    return {inner, outer};
}

GammaEvaluator spherical_gamma_eval(double gamma, double sigma2, bool classic_form) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    GammaEvaluator eval;
    eval.mean_pair = [gamma, sigma2](cplx u) {
        const cplx a = 1.0 / (1.0 + sigma2 * u);
        return gamma * a * a * a;
    };
    eval.cov_pair = [gamma, sigma2, classic_form](cplx u1, cplx u2) {
        const cplx a1 = 1.0 / (1.0 + sigma2 * u1);
        const cplx a2 = 1.0 / (1.0 + sigma2 * u2);
        return classic_form ? gamma * a1 * a2 : gamma * a1 * a1 * a2 * a2;
    };
    return eval;
}

GammaEvaluator block_gamma_eval(const GammaBlockParams& params,
                                const std::vector<double>& sigma_t,
                                bool classic_form) {
    params.validate();
    const int p = params.p();
    if (static_cast<int>(sigma_t.size()) != p)
        throw std::invalid_argument("sigma_t length must equal the kernel dimension");

    // Run-length encode the population diagonal within each block so the
    // common constant-Sigma case costs O(blocks) per kernel evaluation.
    struct Run {
        double t;
        int count;
    };
    struct Block {
        std::vector<Run> runs;
        double nu4;
        double radial;  // tau p^{-delta}
    };
    std::vector<Block> blocks;
    {
        int offset = 0;
        for (std::size_t j = 0; j < params.sizes.size(); ++j) {
            Block b;
            b.nu4 = params.nu4[j];
            b.radial = params.tau[j] * std::pow(p, -params.delta[j]);
            for (int i = 0; i < params.sizes[j]; ++i) {
                const double t = sigma_t[static_cast<std::size_t>(offset + i)];
                if (!(t >= 0.0)) throw std::invalid_argument("population atoms must be nonnegative");
                if (!b.runs.empty() && b.runs.back().t == t)
                    ++b.runs.back().count;
                else
                    b.runs.push_back({t, 1});
            }
            offset += params.sizes[j];
            blocks.push_back(std::move(b));
        }
    }

    GammaEvaluator eval;
    eval.mean_pair = [blocks](cplx u) {
        cplx total = 0.0;
        for (const Block& b : blocks) {
            cplx hadamard = 0.0, tra = 0.0, trb = 0.0;
            for (const Run& r : b.runs) {
                const cplx a = 1.0 / (1.0 + u * r.t);
                const cplx a2 = a * a;
                hadamard += static_cast<double>(r.count) * a * a2;
                tra += static_cast<double>(r.count) * a;
                trb += static_cast<double>(r.count) * a2;
            }
            total += b.nu4 * hadamard + b.radial * tra * trb;
        }
        return total;
    };
    const int pow_arg = classic_form ? 1 : 2;
    eval.cov_pair = [blocks, pow_arg](cplx u1, cplx u2) {
        cplx total = 0.0;
        for (const Block& b : blocks) {
            cplx hadamard = 0.0, tra = 0.0, trb = 0.0;
            for (const Run& r : b.runs) {
                cplx a1 = 1.0 / (1.0 + u1 * r.t);
                cplx a2 = 1.0 / (1.0 + u2 * r.t);
                if (pow_arg == 2) {
                    a1 *= a1;
                    a2 *= a2;
                }
                hadamard += static_cast<double>(r.count) * a1 * a2;
                tra += static_cast<double>(r.count) * a1;
                trb += static_cast<double>(r.count) * a2;
            }
            total += b.nu4 * hadamard + b.radial * tra * trb;
        }
        return total;
    };
    return eval;
}

MeanApprox mean_approximant(const Poly& f, double c, const DiscreteLaw& H,
                            const GammaEvaluator& eval, int n,
                            const ContourSpec& contour) {
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    contour.validate_encloses(c, H);

    cplx s0 = 0.0, s1 = 0.0;
    for (const Node& node : upper_path(contour)) {
        const StieltjesValue sv = solve_companion(node.z, c, H);
        const cplx u = sv.u;
        const cplx d = 1.0 - c * int_u2t2(H, u);
        const cplx fz = f(node.z);
        const cplx k0 = c * u * u * u * int_t2_cube(H, u) / (d * d);
        const cplx k1 = u * u * u / d * eval.mean_pair(u);
        s0 += node.w * fz * k0;
        s1 += node.w * fz * k1;
    }
    MeanApprox out;
    out.m0 = -s0.imag() / std::numbers::pi;
    out.m1 = -s1.imag() / std::numbers::pi / n;
    return out;
}

CovApprox cov_approximant(const Poly& f, const Poly& g, double c,
                          const DiscreteLaw& H, const GammaEvaluator& eval, int n,
                          const ContourSpec& inner, const ContourSpec& outer) {
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    inner.validate_encloses(c, H);
    outer.validate_encloses(c, H);
    if (!(outer.x_l < inner.x_l && inner.x_r < outer.x_r))
        throw std::invalid_argument("covariance contours must be strictly nested");
    if (!(outer.v0 >= inner.v0 + 0.05))
        throw std::invalid_argument("covariance contour heights must differ by at least 0.05");

    struct Eval {
        cplx z, w, u, uprime, gz;
    };
    std::vector<Eval> inner_nodes;
    for (const Node& node : closed_path(inner)) {
        const StieltjesValue sv = solve_companion(node.z, c, H);
        inner_nodes.push_back({node.z, node.w, sv.u, sv.uprime, g(node.z)});
    }

    cplx s0 = 0.0, s1 = 0.0;
    for (const Node& node : upper_path(outer)) {
        const StieltjesValue sv = solve_companion(node.z, c, H);
        const cplx fz = f(node.z);
        cplx t0 = 0.0, t1 = 0.0;
        for (const Eval& e : inner_nodes) {
            const cplx du = sv.u - e.u;
            const cplx dz = node.z - e.z;
            t0 += e.w * e.gz * 2.0 * (sv.uprime * e.uprime / (du * du) - 1.0 / (dz * dz));
            t1 += e.w * e.gz * sv.uprime * e.uprime * eval.cov_pair(sv.u, e.u);
        }
        s0 += node.w * fz * t0;
        s1 += node.w * fz * t1;
    }
    CovApprox out;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    out.v0 = -s0.real() / (2.0 * pi2);
    out.v1 = -s1.real() / (2.0 * pi2) / n;
    return out;
}

double residue_m1_spherical(const Poly& f, double c, bool classic_form) {
    const int deg = f.degree();
    if (deg < 1) throw std::invalid_argument("test function must have degree >= 1");
    const int keep = 2 * deg + 12;

    // z(u) = -1/u + c/(1+u) as a Laurent series at u = 0.
    Laurent z;
    z.lo = -1;
    z.a.assign(static_cast<std::size_t>(keep), 0.0);
    z.a[0] = -1.0;
    for (int k = 1; k < keep; ++k)
        z.a[static_cast<std::size_t>(k)] = (k % 2 == 1) ? c : -c;

    // Horner evaluation of f at the series.
    Laurent s;
    s.lo = 0;
    s.a.assign(static_cast<std::size_t>(keep), 0.0);
    s.a[0] = f.coeff.back();
    for (int k = deg - 1; k >= 0; --k) {
        s = laurent_mul(s, z, keep);
        laurent_add_const(s, f.coeff[static_cast<std::size_t>(k)]);
    }

    // Multiply by u / (1 + u)^3 and read off the u^{-1} coefficient.
    Laurent m;
    m.lo = 1;
    m.a.assign(static_cast<std::size_t>(keep), 0.0);
    for (int k = 0; k < keep - 1; ++k)
        m.a[static_cast<std::size_t>(k)] =
            ((k % 2 == 0) ? 1.0 : -1.0) * 0.5 * (k + 1.0) * (k + 2.0);
    s = laurent_mul(s, m, keep + deg + 4);

    const int idx = -1 - s.lo;
    double res = 0.0;
    if (idx >= 0 && idx < static_cast<int>(s.a.size()))
        res = s.a[static_cast<std::size_t>(idx)];
    return classic_form ? -res : res;
}

JohnMoments john_asymptotics(int p, int n, double gamma) {
    if (p < 1 || n < 1) throw std::invalid_argument("need positive dimensions");
    JohnMoments m;
    m.mean_nU = p + 1.0 + gamma / p;
    m.var_nU = 4.0;
    m.mean_Q = 0.5 * (static_cast<double>(p) * p + p + gamma);
    m.var_Q = static_cast<double>(p) * p;
    return m;
}

}  // namespace gs
