#include "varsparse/tail_maximal.hpp"

#include <cmath>

namespace varsparse {

namespace {

// Deterministic strided pick of up to `budget` cells from a cube range.
template <class F>
void for_sample_cells(const CellGrid& cg, const CellGrid::CellRange& r, int budget, F&& fn) {
    std::int64_t total = 1;
    int d = cg.dim();
    IVec span{};
    for (int i = 0; i < d; ++i) {
        span[i] = r.hi[i] - r.lo[i];
        total *= span[i];
    }
    if (total <= budget) {
        for_each_index(d, span, [&](const IVec& off) {
            IVec cell{};
            for (int i = 0; i < d; ++i) cell[i] = r.lo[i] + off[i];
            fn(cell);
        });
        return;
    }
    for (int s = 0; s < budget; ++s) {
        std::int64_t linear = (2 * s + 1) * total / (2 * budget);
        IVec cell{};
        for (int i = d - 1; i >= 0; --i) {
            cell[i] = r.lo[i] + linear % span[i];
            linear /= span[i];
        }
        fn(cell);
    }
}

double masked_variation_at(const CellGrid& cg, const LatticeFunction& f, const Vec& xi, const MaskRegion& mask,
                           const TruncationSet& I, const VariationParams& params, const QuadratureConfig& quad) {
    return variation_operator(f, &mask, cg.grid().curve(), xi, I, params, quad);
}

}  // namespace

TailMaximalTable::TailMaximalTable(const CellGrid& cg, const LatticeFunction& f, const TruncationSet& I,
                                   const VariationParams& params, const TailMaximalConfig& cfg,
                                   const QuadratureConfig& quad)
    : cg_(cg), cfg_(cfg) {
    const GammaGrid& grid = cg.grid();
    const int d = cg.dim();
    const Box kq0 = dilate_cube(cg.root_box(), cfg.kappa);
    cell_max_.assign(static_cast<std::size_t>(cg.cell_count()), 0.0);

    level_values_.resize(static_cast<std::size_t>(cg.depth()) + 1);
    for (int gen = cg.cell_generation(); gen <= cg.root().k; ++gen) {
        const std::size_t lvl = static_cast<std::size_t>(gen - cg.cell_generation());
        IVec gen_dims{};
        std::int64_t n_cubes = 1;
        for (int i = 0; i < d; ++i) {
            gen_dims[i] = std::int64_t{1} << (grid.side_exp(cg.root().k, i) - grid.side_exp(gen, i));
            n_cubes *= gen_dims[i];
        }
        level_values_[lvl].assign(static_cast<std::size_t>(n_cubes), 0.0);
        if (gen < cfg.gen_lo || gen > cfg.gen_hi) continue;

        std::size_t cube_at = 0;
        for_each_index(d, gen_dims, [&](const IVec& rel) {
            DyadicGammaCube q;
            q.k = gen;
            q.shift = cg.root().shift;
            q.grid_id = cg.root().grid_id;
            for (int i = 0; i < d; ++i) q.m[i] = cg.base_at_gen(gen)[i] + rel[i];

            double v = 0.0;
            if (gen < cg.root().k) {  // mask kQ0 \ kQ0 is empty: v(root) = 0
                MaskRegion mask{kq0, dilate_cube(grid.cube_box(q), cfg.kappa)};
                CellGrid::CellRange range = cg.range_of(q);
                for_sample_cells(cg, range, cfg.esssup_samples, [&](const IVec& cell) {
                    double t = masked_variation_at(cg, f, cg.cell_center(cell), mask, I, params, quad);
                    v = std::max(v, t);
                });
                // fold v(Q) into every cell of Q
                IVec span{};
                for (int i = 0; i < d; ++i) span[i] = range.hi[i] - range.lo[i];
                for_each_index(d, span, [&](const IVec& off) {
                    IVec cell{};
                    for (int i = 0; i < d; ++i) cell[i] = range.lo[i] + off[i];
                    std::size_t at = cg.flat(cell);
                    cell_max_[at] = std::max(cell_max_[at], v);
                });
            }
            level_values_[lvl][cube_at++] = v;
        });
    }
}

double TailMaximalTable::at_point(const Vec& x) const { return cell_max_[cg_.flat(cg_.cell_of_point(x))]; }

double TailMaximalTable::cube_value(const DyadicGammaCube& q) const {
    const GammaGrid& grid = cg_.grid();
    const std::size_t lvl = static_cast<std::size_t>(q.k - cg_.cell_generation());
    if (lvl >= level_values_.size()) throw std::out_of_range("TailMaximalTable::cube_value");
    std::size_t off = 0;
    for (int i = 0; i < cg_.dim(); ++i) {
        std::int64_t gen_dim = std::int64_t{1} << (grid.side_exp(cg_.root().k, i) - grid.side_exp(q.k, i));
        std::int64_t rel = q.m[i] - cg_.base_at_gen(q.k)[i];
        if (rel < 0 || rel >= gen_dim) throw std::out_of_range("TailMaximalTable::cube_value");
        off = off * static_cast<std::size_t>(gen_dim) + static_cast<std::size_t>(rel);
    }
    return level_values_[lvl][off];
}

double tail_maximal(const CellGrid& cg, const LatticeFunction& f, const Vec& x, const TruncationSet& I,
                    const VariationParams& params, const TailMaximalConfig& cfg, const QuadratureConfig& quad) {
    if (!cg.root_box().contains(x)) throw std::domain_error("tail_maximal: point outside Q0");
    const GammaGrid& grid = cg.grid();
    const Box kq0 = dilate_cube(cg.root_box(), cfg.kappa);
    const IVec cell = cg.cell_of_point(x);
    double best = 0.0;
    // tower of cubes containing x, cell generation upward, root excluded
    // (its mask is empty)
    for (int gen = cg.cell_generation(); gen < cg.root().k; ++gen) {
        if (gen < cfg.gen_lo || gen > cfg.gen_hi) continue;
        DyadicGammaCube q = grid.locate(cg.root().shift, gen, cg.cell_center(cell));
        MaskRegion mask{kq0, dilate_cube(grid.cube_box(q), cfg.kappa)};
        CellGrid::CellRange range = cg.range_of(q);
        for_sample_cells(cg, range, cfg.esssup_samples, [&](const IVec& c) {
            best = std::max(best, masked_variation_at(cg, f, cg.cell_center(c), mask, I, params, quad));
        });
    }
    return best;
}

double tail_maximal_unrestricted(const CellGrid& cg, const LatticeFunction& f, const Vec& x,
                                 const TruncationSet& I, const VariationParams& params,
                                 const TailMaximalConfig& cfg, const QuadratureConfig& quad) {
    // For x inside the root, the located cubes of the finer generations lie
    // inside the root by nesting, so the Q-subset-of-Q0 restriction only
    // removes cubes at the root generation and above. The unrestricted sup
    // is the localized tower plus those coarser window cubes.
    double best = tail_maximal(cg, f, x, I, params, cfg, quad);
    const GammaGrid& grid = cg.grid();
    const Box kq0 = dilate_cube(cg.root_box(), cfg.kappa);
    const int top = std::min(grid.config().k_max, cg.root().k + 2);
    for (int gen = cg.root().k; gen <= top; ++gen) {
        if (gen < cfg.gen_lo || gen > cfg.gen_hi) continue;
        DyadicGammaCube q = grid.locate(cg.root().shift, gen, x);
        MaskRegion mask{kq0, dilate_cube(grid.cube_box(q), cfg.kappa)};
        best = std::max(best, variation_operator(f, &mask, grid.curve(), x, I, params, quad));
    }
    return best;
}

Lemma4Report lemma4_check(const CellGrid& cg, const LatticeFunction& f, double p, const TruncationSet& I,
                          const VariationParams& params, const TailMaximalConfig& cfg,
                          double t_norm_estimate, const QuadratureConfig& quad) {
    TailMaximalTable table(cg, f, I, params, cfg, quad);
    const Box kq0 = dilate_cube(cg.root_box(), cfg.kappa);
    MaskRegion lhs_mask{kq0, std::nullopt};

    Lemma4Report rep;
    rep.t_norm_estimate = t_norm_estimate;
    rep.p = p;
    IVec dims = cg.dims();
    for_each_index(cg.dim(), dims, [&](const IVec& cell) {
        Vec x = cg.cell_center(cell);
        double lhs = variation_operator(f, &lhs_mask, cg.grid().curve(), x, I, params, quad);
        double rhs = t_norm_estimate * f.evaluate(x) + table.at_cell(cg.flat(cell));
        ++rep.points;
        if (rhs > 0.0) {
            rep.fitted_constant = std::max(rep.fitted_constant, lhs / rhs);
        } else if (lhs > 1e-10) {
            ++rep.flagged_points;
            if (rep.flagged_examples.size() < 16) rep.flagged_examples.push_back(x);
            rep.max_flagged_lhs = std::max(rep.max_flagged_lhs, lhs);
        }
    });
    return rep;
}

}  // namespace varsparse
