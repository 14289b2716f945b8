#include "varsparse/gamma_grid.hpp"

#include <cmath>

namespace varsparse {

namespace {

std::int64_t floordiv(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t shl_checked(std::int64_t v, std::int64_t bits) {
    if (bits < 0 || bits > 62) throw std::logic_error("gamma_grid: exponent spread too large for exact arithmetic");
    return v << bits;
}

}  // namespace

int encode_shift(const Shift& j, int dim) {
    int id = 0;
    for (int i = dim - 1; i >= 0; --i) id = id * 3 + j[i];
    return id;
}

Vec cube_sides(const MonomialCurve& curve, int k) {
    Vec s{};
    for (int i = 0; i < curve.dim(); ++i)
        s[i] = std::ldexp(1.0, static_cast<int>(curve.floor_k_alpha(k, i)));
    return s;
}

GammaGrid::GammaGrid(GridConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.k_min >= cfg_.k_max && cfg_.k_min != cfg_.k_max)
        throw std::invalid_argument("GridConfig: k_min must be <= k_max");
}

Vec GammaGrid::cube_sides(int k) const { return varsparse::cube_sides(cfg_.curve, k); }

int GammaGrid::offset_sign(int k, int axis) const {
    if (cfg_.convention == ShiftConvention::PaperLiteral) return 1;
    // Alternating third: sign (-1)^{k*alpha_i}. Even exponents keep a fixed
    // offset (side ratio 2^{alpha_i} = 1 mod 3), odd exponents alternate.
    int a = cfg_.curve.alpha_int(axis);
    if (a % 2 == 0) return 1;
    return (k % 2 == 0) ? 1 : -1;
}

void GammaGrid::require_in_window(int k) const {
    if (k < cfg_.k_min || k > cfg_.k_max)
        throw std::out_of_range("GammaGrid: generation outside configured window");
}

void GammaGrid::require_shift_supported(const Shift& j) const {
    bool nonzero = false;
    for (int i = 0; i < dim(); ++i) {
        if (j[i] > 2) throw std::invalid_argument("GammaGrid: shift entries must lie in {0,1,2}");
        nonzero = nonzero || j[i] != 0;
    }
    if (nonzero && !cfg_.curve.integer_exponents())
        throw std::invalid_argument("GammaGrid: shifted grids require integer exponents");
}

std::int64_t GammaGrid::lower_thirds(const DyadicGammaCube& q, int axis) const {
    return 3 * q.m[axis] + static_cast<std::int64_t>(offset_sign(q.k, axis)) * q.shift[axis];
}

DyadicGammaCube GammaGrid::locate(const Shift& j, int k, const Vec& x) const {
    require_in_window(k);
    require_shift_supported(j);
    DyadicGammaCube q;
    q.k = k;
    q.shift = j;
    q.grid_id = encode_shift(j, dim());
    for (int i = 0; i < dim(); ++i) {
        int e = static_cast<int>(side_exp(k, i));
        double u = std::ldexp(x[i], -e) - offset_sign(k, i) * (j[i] / 3.0);
        q.m[i] = static_cast<std::int64_t>(std::floor(u));
    }
    return q;
}

Box GammaGrid::cube_box(const DyadicGammaCube& q) const {
    Box b;
    b.dim = dim();
    for (int i = 0; i < dim(); ++i) {
        int e = static_cast<int>(side_exp(q.k, i));
        double lo3 = static_cast<double>(lower_thirds(q, i));
        b.lo[i] = std::ldexp(lo3, e) / 3.0;
        b.hi[i] = std::ldexp(lo3 + 3.0, e) / 3.0;
    }
    return b;
}

Vec GammaGrid::cube_center(const DyadicGammaCube& q) const {
    Vec c{};
    for (int i = 0; i < dim(); ++i) {
        int e = static_cast<int>(side_exp(q.k, i));
        c[i] = std::ldexp(static_cast<double>(2 * lower_thirds(q, i) + 3), e) / 6.0;
    }
    return c;
}

DyadicGammaCube GammaGrid::parent(const DyadicGammaCube& q) const {
    require_in_window(q.k);
    if (q.k + 1 > cfg_.k_max) throw std::out_of_range("GammaGrid::parent: cube at top generation");
    DyadicGammaCube p;
    p.k = q.k + 1;
    p.shift = q.shift;
    p.grid_id = q.grid_id;
    for (int i = 0; i < dim(); ++i) {
        std::int64_t ratio = shl_checked(1, side_exp(q.k + 1, i) - side_exp(q.k, i));
        // child center in sixth-units of the child scale, then floor-divide
        std::int64_t center6 = 6 * q.m[i] + 2 * static_cast<std::int64_t>(offset_sign(q.k, i)) * q.shift[i] + 3;
        std::int64_t parent_off6 = 2 * static_cast<std::int64_t>(offset_sign(q.k + 1, i)) * q.shift[i] * ratio;
        p.m[i] = floordiv(center6 - parent_off6, 6 * ratio);
    }
    return p;
}

std::vector<DyadicGammaCube> GammaGrid::children(const DyadicGammaCube& q) const {
    require_in_window(q.k);
    if (q.k - 1 < cfg_.k_min) throw std::out_of_range("GammaGrid::children: cube at bottom generation");
    IVec base{}, ratio{};
    for (int i = 0; i < dim(); ++i) {
        ratio[i] = shl_checked(1, side_exp(q.k, i) - side_exp(q.k - 1, i));
        std::int64_t num = 3 * q.m[i] * ratio[i] +
                           q.shift[i] * (static_cast<std::int64_t>(offset_sign(q.k, i)) * ratio[i] -
                                         offset_sign(q.k - 1, i));
        if (num % 3 != 0)
            throw std::invalid_argument("GammaGrid::children: grid not nested under this convention");
        base[i] = num / 3;
    }
    std::vector<DyadicGammaCube> out;
    std::int64_t total = 1;
    for (int i = 0; i < dim(); ++i) total *= ratio[i];
    out.reserve(static_cast<std::size_t>(total));
    for_each_index(dim(), ratio, [&](const IVec& idx) {
        DyadicGammaCube c;
        c.k = q.k - 1;
        c.shift = q.shift;
        c.grid_id = q.grid_id;
        for (int i = 0; i < dim(); ++i) c.m[i] = base[i] + idx[i];
        out.push_back(c);
    });
    return out;
}

CubeRelation GammaGrid::relation(const DyadicGammaCube& a, const DyadicGammaCube& b) const {
    if (a.grid_id != b.grid_id)
        throw std::invalid_argument("GammaGrid::relation: cubes from different shifted grids");
    bool a_in_b = true, b_in_a = true, disjoint = false;
    for (int i = 0; i < dim(); ++i) {
        std::int64_t ea = side_exp(a.k, i), eb = side_exp(b.k, i);
        std::int64_t e = std::min(ea, eb);
        std::int64_t loA = shl_checked(lower_thirds(a, i), ea - e);
        std::int64_t hiA = loA + shl_checked(3, ea - e);
        std::int64_t loB = shl_checked(lower_thirds(b, i), eb - e);
        std::int64_t hiB = loB + shl_checked(3, eb - e);
        if (hiA <= loB || hiB <= loA) disjoint = true;
        if (!(loA >= loB && hiA <= hiB)) a_in_b = false;
        if (!(loB >= loA && hiB <= hiA)) b_in_a = false;
    }
    if (disjoint) return CubeRelation::Disjoint;
    if (a_in_b && b_in_a) return CubeRelation::Equal;
    if (a_in_b) return CubeRelation::FirstInsideSecond;
    if (b_in_a) return CubeRelation::SecondInsideFirst;
    return CubeRelation::Overlap;
}

double GammaGrid::grid_constant() const {
    if (cfg_.k_min == cfg_.k_max)
        throw std::invalid_argument("grid_constant: single-generation grid has no parent relations");
    double worst = 0.0;
    Shift zero{};
    for (int k = cfg_.k_min; k < cfg_.k_max; ++k) {
        for (std::int64_t m0 = -2; m0 <= 2; ++m0) {
            DyadicGammaCube q;
            q.k = k;
            q.shift = zero;
            q.grid_id = 0;
            for (int i = 0; i < dim(); ++i) q.m[i] = (i % 2 == 0) ? m0 : -m0;
            DyadicGammaCube p = parent(q);
            if (relation(q, p) != CubeRelation::FirstInsideSecond)
                throw std::logic_error("grid_constant: parent does not strictly contain cube");
            worst = std::max(worst, std::ldexp(1.0, p.k - q.k));
        }
    }
    return worst;
}

double GammaGrid::kappa() const { return grid_constant() + 1.0; }

GammaCube GammaGrid::enlarge_to_gamma_cube(const DyadicGammaCube& q) const {
    GammaCube g;
    g.dim = dim();
    g.center = cube_center(q);
    g.l = std::ldexp(1.0, q.k + 2);
    for (int i = 0; i < dim(); ++i) g.sides[i] = cfg_.curve.pow_alpha(g.l, i);
    return g;
}

GammaCube GammaGrid::embed_gamma_in_dyadic(const DyadicGammaCube& q) const {
    GammaCube g;
    g.dim = dim();
    g.center = cube_center(q);
    g.l = cfg_.curve.integer_exponents() ? std::ldexp(1.0, q.k) : std::ldexp(1.0, q.k - 1);
    for (int i = 0; i < dim(); ++i) g.sides[i] = cfg_.curve.pow_alpha(g.l, i);
    return g;
}

PartitionCheck GammaGrid::check_partition(const Shift& j, int k, int probe_gen, int window) const {
    require_in_window(k);
    require_in_window(probe_gen);
    require_shift_supported(j);
    if (probe_gen > k) throw std::invalid_argument("check_partition: probe generation must be <= k");
    PartitionCheck res;
    IVec span{};
    for (int i = 0; i < dim(); ++i) span[i] = 2 * window + 1;
    const int gid = encode_shift(j, dim());
    for_each_index(dim(), span, [&](const IVec& idx) {
        DyadicGammaCube probe_cube;
        probe_cube.k = probe_gen;
        probe_cube.shift = j;
        probe_cube.grid_id = gid;
        for (int i = 0; i < dim(); ++i) probe_cube.m[i] = idx[i] - window;
        ++res.probes;

        // Probe = center of probe_cube, exact in per-axis sixth-units at the
        // probe generation's scale.
        IVec c6{};
        for (int i = 0; i < dim(); ++i) c6[i] = 2 * lower_thirds(probe_cube, i) + 3;

        auto contains = [&](const DyadicGammaCube& q) {
            for (int i = 0; i < dim(); ++i) {
                std::int64_t sh = side_exp(k, i) - side_exp(probe_gen, i);
                std::int64_t lo6 = shl_checked(2 * lower_thirds(q, i), sh);
                std::int64_t hi6 = lo6 + shl_checked(6, sh);
                if (!(c6[i] >= lo6 && c6[i] < hi6)) return false;
            }
            return true;
        };

        // Expected host at generation k by exact floor division.
        DyadicGammaCube host;
        host.k = k;
        host.shift = j;
        host.grid_id = gid;
        for (int i = 0; i < dim(); ++i) {
            std::int64_t ratio = shl_checked(1, side_exp(k, i) - side_exp(probe_gen, i));
            std::int64_t off6 = 2 * static_cast<std::int64_t>(offset_sign(k, i)) * j[i] * ratio;
            host.m[i] = floordiv(c6[i] - off6, 6 * ratio);
        }

        bool ok = contains(host);
        for (int i = 0; i < dim() && ok; ++i) {
            for (int dm = -1; dm <= 1; dm += 2) {
                DyadicGammaCube n = host;
                n.m[i] += dm;
                if (contains(n)) {
                    ok = false;
                    break;
                }
            }
        }
        DyadicGammaCube located = locate(j, k, cube_center(probe_cube));
        if (!ok || !located.same_cube(host, dim())) ++res.failures;
    });
    return res;
}

NestingCheck GammaGrid::check_nesting(const Shift& j, int k_lo, int k_hi, int window) const {
    require_in_window(k_lo);
    require_in_window(k_hi);
    require_shift_supported(j);
    NestingCheck res;
    std::vector<DyadicGammaCube> cubes;
    IVec span{};
    for (int i = 0; i < dim(); ++i) span[i] = 2 * window + 1;
    for (int k = k_lo; k <= k_hi; ++k) {
        for_each_index(dim(), span, [&](const IVec& idx) {
            DyadicGammaCube q;
            q.k = k;
            q.shift = j;
            q.grid_id = encode_shift(j, dim());
            for (int i = 0; i < dim(); ++i) q.m[i] = idx[i] - window;
            cubes.push_back(q);
        });
    }
    for (std::size_t a = 0; a < cubes.size(); ++a) {
        for (std::size_t b = a + 1; b < cubes.size(); ++b) {
            if (cubes[a].k == cubes[b].k) continue;
            ++res.pairs;
            if (relation(cubes[a], cubes[b]) == CubeRelation::Overlap) ++res.violations;
        }
    }
    return res;
}

double GammaGrid::check_parent_ratio(const Shift& j, int window) const {
    require_shift_supported(j);
    double worst = 0.0;
    IVec span{};
    for (int i = 0; i < dim(); ++i) span[i] = 2 * window + 1;
    for (int k = cfg_.k_min; k < cfg_.k_max; ++k) {
        for_each_index(dim(), span, [&](const IVec& idx) {
            DyadicGammaCube q;
            q.k = k;
            q.shift = j;
            q.grid_id = encode_shift(j, dim());
            for (int i = 0; i < dim(); ++i) q.m[i] = idx[i] - window;
            DyadicGammaCube p = parent(q);
            if (relation(q, p) != CubeRelation::FirstInsideSecond)
                throw std::logic_error("check_parent_ratio: parent containment failed");
            worst = std::max(worst, std::ldexp(1.0, p.k - q.k));
        });
    }
    return worst;
}

bool GammaGrid::check_shrinking_chain(const Shift& j, const Vec& x) const {
    DyadicGammaCube prev;
    bool have_prev = false;
    for (int k = cfg_.k_max; k >= cfg_.k_min; --k) {
        DyadicGammaCube q = locate(j, k, x);
        if (!cube_box(q).contains(x)) return false;
        if (have_prev && relation(q, prev) == CubeRelation::Overlap) return false;
        prev = q;
        have_prev = true;
    }
    return true;
}

}  // namespace varsparse
