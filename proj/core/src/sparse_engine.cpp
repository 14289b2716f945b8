#include "varsparse/sparse_engine.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace varsparse {

namespace {

std::int64_t ipow4(int e) { return std::int64_t{1} << (2 * e); }

std::int64_t floordiv2(std::int64_t a) { return (a >= 0) ? a / 2 : -((-a + 1) / 2); }

std::vector<std::uint8_t> cells_of_indicator(const CellGrid& cg, const std::vector<std::uint8_t>& e) {
    if (static_cast<std::int64_t>(e.size()) != cg.cell_count())
        throw std::domain_error("cz_decompose: indicator does not match the root lattice");
    return e;
}

}  // namespace

CZResult cz_decompose(const CellGrid& cg, const std::vector<std::uint8_t>& e_cells, double height) {
    if (!(height > 0.0 && height < 1.0)) throw std::invalid_argument("cz_decompose: height must lie in (0,1)");
    auto cells = cells_of_indicator(cg, e_cells);
    PrefixSum prefix(cg.dim(), cg.dims(), cells);

    CZResult res;
    IVec all_lo{}, all_hi = cg.dims();
    res.e_cells = prefix.count(all_lo, all_hi);

    // depth-first stopping time from the root's children
    std::vector<DyadicGammaCube> stack;
    if (cg.depth() > 0) {
        for (auto& c : cg.grid().children(cg.root())) stack.push_back(c);
    }
    while (!stack.empty()) {
        DyadicGammaCube q = stack.back();
        stack.pop_back();
        CellGrid::CellRange r = cg.range_of(q);
        std::int64_t total = 1;
        for (int i = 0; i < cg.dim(); ++i) total *= r.hi[i] - r.lo[i];
        std::int64_t hit = prefix.count(r.lo, r.hi);
        if (hit == 0) continue;
        if (static_cast<double>(hit) > height * static_cast<double>(total)) {
            res.selected.push_back(q);
            res.selected_cells += total;
            res.covered_cells += hit;
            continue;
        }
        if (q.k > cg.cell_generation())
            for (auto& c : cg.grid().children(q)) stack.push_back(c);
    }
    res.residual_measure = static_cast<double>(res.e_cells - res.covered_cells) * cg.cell_volume();
    return res;
}

ExceptionalSet exceptional_set(const CellGrid& cg, const LatticeFunction& f, const TruncationSet& I,
                               const VariationParams& params, const SparseEngineConfig& cfg) {
    ExceptionalSet out;
    out.cells.assign(static_cast<std::size_t>(cg.cell_count()), 0);

    const double kappa2 = cfg.kappa * cfg.kappa;
    const Box ref_box = dilate_cube(cg.root_box(), kappa2);
    out.reference_average = f.average(ref_box, cfg.p);
    if (out.reference_average == 0.0) {
        out.threshold_constant = 1.0;
        return out;
    }

    TailMaximalConfig tail = cfg.tail;
    tail.kappa = cfg.kappa;
    TailMaximalTable table(cg, f, I, params, tail, cfg.quad);

    const std::int64_t total = cg.cell_count();
    const std::int64_t target = total / (std::int64_t{1} << (cg.dim() + 2));
    std::ostringstream trace;
    for (int m = 0; m <= cfg.ladder_max; ++m) {
        const double c = std::ldexp(1.0, m);
        const double thr = c * out.reference_average;
        std::int64_t count = 0, f_part = 0, m_part = 0;
        std::fill(out.cells.begin(), out.cells.end(), 0);
        IVec dims = cg.dims();
        for_each_index(cg.dim(), dims, [&](const IVec& cell) {
            const std::size_t at = cg.flat(cell);
            bool in_f = f.evaluate(cg.cell_center(cell)) > thr;
            bool in_m = table.at_cell(at) > thr;
            if (in_f) ++f_part;
            if (in_m) ++m_part;
            if (in_f || in_m) {
                out.cells[at] = 1;
                ++count;
            }
        });
        if (count <= target) {
            out.threshold_constant = c;
            out.cell_count = count;
            out.f_part_cells = f_part;
            out.m_part_cells = m_part;
            return out;
        }
        trace << "C=" << c << " -> |E|=" << count << " cells (target " << target << "); ";
    }
    throw ConstructionError("exceptional_set: threshold ladder exhausted: " + trace.str());
}

Box SparseFamily::node_box(std::size_t i) const {
    if (finalized) return nodes[i].enlarged.box();
    return lattice.grid().cube_box(nodes[i].cube);
}

std::vector<std::string> SparseFamily::fingerprint() const {
    std::vector<std::string> fp;
    fp.reserve(nodes.size());
    for (const auto& n : nodes) {
        std::ostringstream os;
        os << "L" << n.level << ":k" << n.cube.k << ":m";
        for (int i = 0; i < lattice.dim(); ++i) os << (i ? "," : "") << n.cube.m[i];
        fp.push_back(os.str());
    }
    return fp;
}

namespace {

void build_recursive(SparseFamily& fam, const LatticeFunction& f, const TruncationSet& I,
                     const VariationParams& params, const SparseEngineConfig& cfg, int node_index) {
    SparseNode& self = fam.nodes[static_cast<std::size_t>(node_index)];
    const DyadicGammaCube root_cube = self.cube;
    const int level = self.level;
    const int sub_depth = root_cube.k - fam.lattice.cell_generation();
    CellGrid sub(fam.lattice.grid(), root_cube, sub_depth);

    ExceptionalSet e = exceptional_set(sub, f, I, params, cfg);
    fam.nodes[static_cast<std::size_t>(node_index)].threshold_constant = e.threshold_constant;
    if (e.cell_count == 0) return;

    CZResult cz = cz_decompose(sub, e.cells, fam.height);
    std::vector<int> child_indices;
    for (const auto& p : cz.selected) {
        SparseNode child;
        child.cube = p;
        child.level = level + 1;
        child.parent = node_index;
        child.cube_cells = fam.lattice.cells_in(p);
        child.witness_cells = child.cube_cells;
        fam.nodes.push_back(child);
        child_indices.push_back(static_cast<int>(fam.nodes.size()) - 1);
        fam.nodes[static_cast<std::size_t>(node_index)].selected_child_cells += child.cube_cells;
    }
    {
        SparseNode& s = fam.nodes[static_cast<std::size_t>(node_index)];
        s.witness_cells = s.cube_cells - s.selected_child_cells;
    }
    if (level + 1 >= cfg.max_depth) {
        if (!child_indices.empty()) fam.depth_exhausted = true;
        return;
    }
    for (int ci : child_indices) build_recursive(fam, f, I, params, cfg, ci);
}

}  // namespace

SparseFamily build_sparse_family(const CellGrid& cg, const LatticeFunction& f, const TruncationSet& I,
                                 const VariationParams& params, const SparseEngineConfig& cfg) {
    if (cfg.max_depth < 0) throw std::invalid_argument("build_sparse_family: max_depth must be >= 0");
    SparseFamily fam(cg);
    fam.height = (cfg.height == 0.0) ? std::ldexp(1.0, -(cg.dim() + 1)) : cfg.height;

    SparseNode root;
    root.cube = cg.root();
    root.level = 0;
    root.parent = -1;
    root.cube_cells = cg.cell_count();
    root.witness_cells = root.cube_cells;
    fam.nodes.push_back(root);
    if (cfg.max_depth > 0) build_recursive(fam, f, I, params, cfg, 0);
    return fam;
}

SparseFamily finalize_family(SparseFamily fam) {
    if (fam.finalized) return fam;
    const CellGrid& cg = fam.lattice;
    const GammaGrid& grid = cg.grid();
    const int d = cg.dim();
    if (!grid.curve().integer_exponents())
        throw std::invalid_argument("finalize_family: enlargement requires integer exponents");

    fam.finalized = true;
    double inherited = std::numeric_limits<double>::infinity();

    // enlargement and inherited witness ratios (independent of the paint)
    for (std::size_t i = 0; i < fam.nodes.size(); ++i) {
        SparseNode& n = fam.nodes[i];
        n.enlarged = grid.enlarge_to_gamma_cube(n.cube);
        CellGrid::CellRange r = cg.range_of(n.cube);
        n.enlarged_cells = 1;
        for (int a = 0; a < d; ++a) n.enlarged_cells *= ipow4(grid.curve().alpha_int(a)) * (r.hi[a] - r.lo[a]);
        if (n.enlarged_cells > 0)
            inherited = std::min(inherited, static_cast<double>(n.witness_cells) / static_cast<double>(n.enlarged_cells));
    }
    fam.eta_inherited = fam.nodes.empty() ? 0.0 : inherited;

    // witness lattice: root-cell-sized cells over the enlarged root cube;
    // needs an even cell count per axis to stay cell-aligned
    bool lattice_ok = cg.depth() >= 1 && !fam.nodes.empty();
    std::int64_t wtotal = 1;
    for (int i = 0; i < d && lattice_ok; ++i) {
        std::int64_t scale = ipow4(grid.curve().alpha_int(i));
        fam.wdims[i] = scale * cg.dims()[i];
        if ((scale - 1) * cg.dims()[i] % 2 != 0) lattice_ok = false;
        fam.woffset[i] = (scale - 1) * cg.dims()[i] / 2;
        wtotal *= fam.wdims[i];
        if (wtotal > (std::int64_t{1} << 24)) lattice_ok = false;  // keep the paint bounded
    }
    if (!lattice_ok) {
        fam.reselection_ok = false;
        fam.eta_certified = 0.0;
        return fam;
    }

    struct Range {
        IVec lo{}, hi{};
        std::int64_t count = 1;
    };
    std::vector<Range> ranges(fam.nodes.size());
    for (std::size_t i = 0; i < fam.nodes.size(); ++i) {
        CellGrid::CellRange r = cg.range_of(fam.nodes[i].cube);
        Range w;
        for (int a = 0; a < d; ++a) {
            // Q~ interval in half-cell units relative to the witness origin
            std::int64_t center2 = (r.lo[a] + fam.woffset[a]) + (r.hi[a] + fam.woffset[a]);
            std::int64_t ext2 = ipow4(grid.curve().alpha_int(a)) * (r.hi[a] - r.lo[a]);
            w.lo[a] = floordiv2(center2 - ext2);
            w.hi[a] = floordiv2(center2 + ext2);
            w.count *= w.hi[a] - w.lo[a];
        }
        ranges[i] = w;
    }

    // greedy witness re-selection, deepest cubes first, raster order
    const double eta_target = std::ldexp(1.0, -(2 * d - 1));  // 1 / (2 * 4^(d-1))
    fam.witness_paint.assign(static_cast<std::size_t>(wtotal), -1);
    std::vector<std::size_t> order(fam.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fam.nodes[a].level > fam.nodes[b].level;
    });

    IVec wstrides{};
    wstrides[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) wstrides[i] = wstrides[i + 1] * fam.wdims[i + 1];

    bool all_met = true;
    for (std::size_t oi : order) {
        SparseNode& n = fam.nodes[oi];
        const Range& w = ranges[oi];
        std::int64_t quota = static_cast<std::int64_t>(std::llround(eta_target * static_cast<double>(w.count)));
        std::int64_t claimed = 0;
        IVec span{};
        for (int a = 0; a < d; ++a) span[a] = w.hi[a] - w.lo[a];
        for_each_index(d, span, [&](const IVec& off) {
            if (claimed >= quota) return;
            std::size_t at = 0;
            for (int a = 0; a < d; ++a) at += static_cast<std::size_t>((w.lo[a] + off[a]) * wstrides[a]);
            if (fam.witness_paint[at] < 0) {
                fam.witness_paint[at] = static_cast<std::int32_t>(oi);
                ++claimed;
            }
        });
        n.reselected_cells = claimed;
        if (claimed < quota) all_met = false;
    }
    fam.reselection_ok = all_met && !fam.nodes.empty();
    if (fam.reselection_ok) {
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& n : fam.nodes)
            worst = std::min(worst, static_cast<double>(n.reselected_cells) / static_cast<double>(n.enlarged_cells));
        fam.eta_certified = worst;
    }
    return fam;
}

SparsityCheck verify_sparsity(const SparseFamily& fam, double eta) {
    SparsityCheck res;
    res.disjoint = true;
    res.worst_ratio = std::numeric_limits<double>::infinity();
    if (fam.nodes.empty()) {
        res.ok = true;
        res.worst_ratio = 0.0;
        return res;
    }

    if (!fam.finalized) {
        // recompute witness ownership: deepest node containing each cell wins;
        // duplicate cubes steal each other's witnesses and fail the bound
        const CellGrid& cg = fam.lattice;
        std::vector<std::int32_t> paint(static_cast<std::size_t>(cg.cell_count()), -1);
        std::vector<std::size_t> order(fam.nodes.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return fam.nodes[a].level < fam.nodes[b].level;
        });
        for (std::size_t oi : order) {
            CellGrid::CellRange r = cg.range_of(fam.nodes[oi].cube);
            IVec span{};
            for (int i = 0; i < cg.dim(); ++i) span[i] = r.hi[i] - r.lo[i];
            for_each_index(cg.dim(), span, [&](const IVec& off) {
                IVec cell{};
                for (int i = 0; i < cg.dim(); ++i) cell[i] = r.lo[i] + off[i];
                paint[cg.flat(cell)] = static_cast<std::int32_t>(oi);
            });
        }
        std::vector<std::int64_t> owned(fam.nodes.size(), 0);
        for (std::int32_t p : paint)
            if (p >= 0) ++owned[static_cast<std::size_t>(p)];
        for (std::size_t i = 0; i < fam.nodes.size(); ++i) {
            ++res.checked;
            double ratio = static_cast<double>(owned[i]) / static_cast<double>(fam.nodes[i].cube_cells);
            if (ratio < res.worst_ratio) {
                res.worst_ratio = ratio;
                res.worst_node = static_cast<int>(i);
            }
        }
        res.ok = res.worst_ratio >= eta;
        return res;
    }

    if (fam.witness_paint.empty()) {
        res.ok = false;
        res.disjoint = false;
        return res;
    }
    std::vector<std::int64_t> owned(fam.nodes.size(), 0);
    for (std::int32_t p : fam.witness_paint)
        if (p >= 0) ++owned[static_cast<std::size_t>(p)];
    for (std::size_t i = 0; i < fam.nodes.size(); ++i) {
        ++res.checked;
        if (fam.nodes[i].enlarged_cells <= 0) continue;
        double ratio = static_cast<double>(owned[i]) / static_cast<double>(fam.nodes[i].enlarged_cells);
        if (ratio < res.worst_ratio) {
            res.worst_ratio = ratio;
            res.worst_node = static_cast<int>(i);
        }
    }
    res.ok = res.worst_ratio >= eta;
    return res;
}

std::vector<double> sparse_node_averages(const SparseFamily& fam, const LatticeFunction& f, double p,
                                         double kappa) {
    const double kappa2 = kappa * kappa;
    MaskRegion mask{dilate_cube(fam.lattice.root_box(), kappa2), std::nullopt};
    std::vector<double> avgs(fam.nodes.size(), 0.0);
    for (std::size_t i = 0; i < fam.nodes.size(); ++i)
        avgs[i] = f.average_masked(dilate_cube(fam.node_box(i), kappa2), p, &mask);
    return avgs;
}

double sparse_operator_with(const SparseFamily& fam, std::span<const double> node_averages, const Vec& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < fam.nodes.size(); ++i)
        if (fam.node_box(i).contains(x)) acc += node_averages[i];
    return acc;
}

double sparse_operator(const SparseFamily& fam, const LatticeFunction& f, const Vec& x, double p,
                       double kappa) {
    return sparse_operator_with(fam, sparse_node_averages(fam, f, p, kappa), x);
}

DominationReport verify_domination(const CellGrid& cg, const LatticeFunction& f, const TruncationSet& I,
                                   const VariationParams& params, const SparseEngineConfig& cfg,
                                   bool keep_pointwise) {
    DominationReport rep;
    rep.p = cfg.p;
    rep.r = params.r;
    rep.keep_pointwise = keep_pointwise;

    SparseFamily dyadic = build_sparse_family(cg, f, I, params, cfg);
    SparseFamily final_fam = finalize_family(dyadic);
    // the dyadic view shares the node list; reuse it before finalization data
    SparseFamily dyadic_view = final_fam;
    dyadic_view.finalized = false;

    rep.family_fingerprint = final_fam.fingerprint();
    rep.reselection_ok = final_fam.reselection_ok;
    rep.eta_inherited = final_fam.eta_inherited;
    rep.eta_certified = final_fam.eta_certified;

    std::vector<double> avg_dyadic_p = sparse_node_averages(dyadic_view, f, cfg.p, cfg.kappa);
    std::vector<double> avg_final_p1 = sparse_node_averages(final_fam, f, 1.0, cfg.kappa);
    std::vector<double> avg_final_p = sparse_node_averages(final_fam, f, cfg.p, cfg.kappa);

    MaskRegion lhs_mask{dilate_cube(cg.root_box(), cfg.kappa), std::nullopt};
    IVec dims = cg.dims();
    for_each_index(cg.dim(), dims, [&](const IVec& cell) {
        Vec x = cg.cell_center(cell);
        double lhs = variation_operator(f, &lhs_mask, cg.grid().curve(), x, I, params, cfg.quad);
        double r1 = sparse_operator_with(dyadic_view, avg_dyadic_p, x);
        double r2 = sparse_operator_with(final_fam, avg_final_p1, x);
        double r3 = sparse_operator_with(final_fam, avg_final_p, x);
        ++rep.points;
        rep.max_lhs = std::max(rep.max_lhs, lhs);
        auto account = [&](double rhs, double& fitted, std::int64_t& flags) {
            if (rhs > 0.0)
                fitted = std::max(fitted, lhs / rhs);
            else if (lhs > rep.lhs_tolerance)
                ++flags;
        };
        account(r1, rep.fitted_dyadic_p, rep.flags_dyadic_p);
        account(r2, rep.fitted_final_p1, rep.flags_final_p1);
        account(r3, rep.fitted_final_p, rep.flags_final_p);
        if (keep_pointwise) {
            rep.points_x.push_back(x);
            rep.lhs.push_back(lhs);
            rep.rhs_final_p1.push_back(r2);
        }
    });
    return rep;
}

}  // namespace varsparse
