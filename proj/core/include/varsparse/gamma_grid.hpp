#pragma once

#include "varsparse/curve.hpp"
#include "varsparse/types.hpp"

namespace varsparse {

/// Placement rule for the 3^d shifted dyadic gamma-grids.
///
/// PaperLiteral puts generation k of grid j at offset (j_i/3) * side_i in
/// every coordinate. AlternatingThird flips the offset sign per generation
/// in every coordinate whose exponent is odd (sign (-1)^{k*alpha_i}); this
/// is the one-third trick adapted to side ratios 2^{alpha_i}, and it is the
/// convention under which cross-generation nesting actually holds. Under
/// PaperLiteral, nesting fails in odd-exponent coordinates for nonzero
/// shifts; the checkers below measure that instead of assuming it.
enum class ShiftConvention { PaperLiteral, AlternatingThird };

struct GridConfig {
    MonomialCurve curve = MonomialCurve::standard(2);
    int k_min = -8;
    int k_max = 8;
    ShiftConvention convention = ShiftConvention::AlternatingThird;
};

/// Node of a shifted dyadic gamma-grid; geometry lives in GammaGrid.
struct DyadicGammaCube {
    int k = 0;       // generation; l_Q = 2^k
    IVec m{};        // lattice index
    Shift shift{};   // j vector, entries in {0,1,2}
    int grid_id = 0; // base-3 encoding of the shift

    bool same_cube(const DyadicGammaCube& o, int dim) const {
        if (k != o.k || grid_id != o.grid_id) return false;
        for (int i = 0; i < dim; ++i)
            if (m[i] != o.m[i]) return false;
        return true;
    }
};

/// gamma-cube: side length in coordinate i equals l^{alpha_i}.
struct GammaCube {
    int dim = 0;
    Vec center{};
    double l = 1.0;
    Vec sides{};

    Box box() const { return Box::from_center_sides(dim, center, sides); }
};

enum class CubeRelation { Equal, FirstInsideSecond, SecondInsideFirst, Disjoint, Overlap };

struct PartitionCheck {
    std::int64_t probes = 0;
    std::int64_t failures = 0;
    bool ok() const { return failures == 0 && probes > 0; }
};

struct NestingCheck {
    std::int64_t pairs = 0;
    std::int64_t violations = 0;
    bool ok() const { return violations == 0 && pairs > 0; }
};

/// Navigable family of shifted dyadic gamma-grids over a finite generation
/// window. Cube boundaries are rationals with denominator 3; all containment
/// and navigation decisions are made in exact integer arithmetic on
/// third-units, so partition/nesting checks are tolerance-free.
class GammaGrid {
public:
    explicit GammaGrid(GridConfig cfg);

    const GridConfig& config() const { return cfg_; }
    const MonomialCurve& curve() const { return cfg_.curve; }
    int dim() const { return cfg_.curve.dim(); }

    /// Side lengths (2^{floor(k a_1)}, ..., 2^{floor(k a_d)}).
    Vec cube_sides(int k) const;

    /// Generation-k cube of grid j containing x (half-open convention).
    DyadicGammaCube locate(const Shift& j, int k, const Vec& x) const;

    /// Smallest dyadic gamma-cube strictly containing q (next generation up).
    DyadicGammaCube parent(const DyadicGammaCube& q) const;

    /// Generation k-1 cubes tiling q. Requires a nested configuration.
    std::vector<DyadicGammaCube> children(const DyadicGammaCube& q) const;

    Box cube_box(const DyadicGammaCube& q) const;
    Vec cube_center(const DyadicGammaCube& q) const;

    /// Exact set relation between two cubes of the same shifted grid.
    CubeRelation relation(const DyadicGammaCube& a, const DyadicGammaCube& b) const;

    /// Smallest observed bound on l_{parent}/l_Q over an exhaustive parent
    /// scan of the configured window. Errors on a single-generation window.
    double grid_constant() const;

    /// kappa = C + 1 with C = grid_constant().
    double kappa() const;

    /// Concentric gamma-cube with l = 2^{k+2}; contains 3Q.
    GammaCube enlarge_to_gamma_cube(const DyadicGammaCube& q) const;

    /// Concentric gamma-cube contained in q with l_Q <= 2 l; for integer
    /// exponents the sides coincide with q's.
    GammaCube embed_gamma_in_dyadic(const DyadicGammaCube& q) const;

    // --- property surveys (sec. 1.1.1 properties (1)-(4)) ---

    /// Property (1): probe points (centers of generation `probe_gen` cubes in
    /// an index window) lie in exactly one generation-k cube, and locate()
    /// agrees. Exact arithmetic.
    PartitionCheck check_partition(const Shift& j, int k, int probe_gen, int window) const;

    /// Property (2): cubes of generations [k_lo, k_hi] in an index window are
    /// pairwise nested-or-disjoint. Violations counted, not asserted.
    NestingCheck check_nesting(const Shift& j, int k_lo, int k_hi, int window) const;

    /// Property (3): max l-ratio over parent relations in the window; also
    /// verifies strict containment of each cube in its parent.
    double check_parent_ratio(const Shift& j, int window) const;

    /// Property (4) at finite truncation: locate() chains down to k_min stay
    /// inside every coarser located cube.
    bool check_shrinking_chain(const Shift& j, const Vec& x) const;

    // exact boundary access (third-units at exponent floor(k a_i))
    std::int64_t lower_thirds(const DyadicGammaCube& q, int axis) const;
    std::int64_t side_exp(int k, int axis) const { return cfg_.curve.floor_k_alpha(k, axis); }
    int offset_sign(int k, int axis) const;

private:
    void require_in_window(int k) const;
    void require_shift_supported(const Shift& j) const;

    GridConfig cfg_;
};

/// Free-function spellings of the per-operation contract.
Vec cube_sides(const MonomialCurve& curve, int k);
int encode_shift(const Shift& j, int dim);

}  // namespace varsparse
