#pragma once

#include "varsparse/gamma_grid.hpp"

namespace varsparse {

/// Gamma-adapted cell lattice over a root dyadic gamma-cube: the cells are
/// the generation (root.k - depth) cubes inside the root, 2^{depth * alpha_i}
/// per axis. Every dyadic gamma-cube of the intermediate generations is an
/// exact union of cells, so set measures and stopping times are exact at
/// this resolution and the Calderon-Zygmund descent bottoms out at single
/// cells.
class CellGrid {
public:
    CellGrid(GammaGrid grid, DyadicGammaCube root, int depth)
        : grid_(std::move(grid)), root_(root), depth_(depth) {
        if (depth < 0) throw std::invalid_argument("CellGrid: depth must be nonnegative");
        if (root.k - depth < grid_.config().k_min || root.k > grid_.config().k_max)
            throw std::out_of_range("CellGrid: root subtree exceeds the grid window");
        const int d = grid_.dim();
        total_ = 1;
        for (int i = 0; i < d; ++i) {
            auto spread = grid_.side_exp(root.k, i) - grid_.side_exp(cell_generation(), i);
            if (spread < 0 || spread > 40) throw std::invalid_argument("CellGrid: unsupported depth");
            dims_[i] = std::int64_t{1} << spread;
            total_ *= dims_[i];
        }
        strides_[d - 1] = 1;
        for (int i = d - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * dims_[i + 1];
        root_box_ = grid_.cube_box(root_);
        cell_vol_ = root_box_.volume() / static_cast<double>(total_);
        for (int g = root.k - depth; g <= root.k; ++g) bases_.push_back(compute_base(g));
    }

    const GammaGrid& grid() const { return grid_; }
    const DyadicGammaCube& root() const { return root_; }
    int depth() const { return depth_; }
    int dim() const { return grid_.dim(); }
    int cell_generation() const { return root_.k - depth_; }
    const IVec& dims() const { return dims_; }
    std::int64_t cell_count() const { return total_; }
    const Box& root_box() const { return root_box_; }
    double cell_volume() const { return cell_vol_; }

    struct CellRange {
        IVec lo{}, hi{};  // half-open, in cell coordinates
    };

    /// Cell range covered by a cube of the root's subtree (exact tiling).
    CellRange range_of(const DyadicGammaCube& q) const {
        if (q.grid_id != root_.grid_id || q.k < cell_generation() || q.k > root_.k)
            throw std::invalid_argument("CellGrid::range_of: cube not in the root subtree");
        CellRange r;
        const IVec& base_q = bases_[static_cast<std::size_t>(q.k - cell_generation())];
        for (int i = 0; i < dim(); ++i) {
            std::int64_t per = std::int64_t{1} << (grid_.side_exp(q.k, i) - grid_.side_exp(cell_generation(), i));
            std::int64_t rel = q.m[i] - base_q[i];
            r.lo[i] = rel * per;
            r.hi[i] = r.lo[i] + per;
            if (r.lo[i] < 0 || r.hi[i] > dims_[i])
                throw std::invalid_argument("CellGrid::range_of: cube outside the root");
        }
        return r;
    }

    std::int64_t cells_in(const DyadicGammaCube& q) const {
        CellRange r = range_of(q);
        std::int64_t n = 1;
        for (int i = 0; i < dim(); ++i) n *= r.hi[i] - r.lo[i];
        return n;
    }

    const IVec& base_at_gen(int gen) const {
        if (gen < cell_generation() || gen > root_.k) throw std::out_of_range("CellGrid::base_at_gen");
        return bases_[static_cast<std::size_t>(gen - cell_generation())];
    }

    DyadicGammaCube cell_cube(const IVec& cell) const {
        DyadicGammaCube q;
        q.k = cell_generation();
        q.shift = root_.shift;
        q.grid_id = root_.grid_id;
        for (int i = 0; i < dim(); ++i) q.m[i] = base_at_gen(q.k)[i] + cell[i];
        return q;
    }

    Vec cell_center(const IVec& cell) const { return grid_.cube_center(cell_cube(cell)); }

    /// Cell containing x; domain error if x is outside the root cube.
    IVec cell_of_point(const Vec& x) const {
        if (!root_box_.contains(x)) throw std::domain_error("CellGrid: point outside the root cube");
        DyadicGammaCube c = grid_.locate(root_.shift, cell_generation(), x);
        IVec cell{};
        for (int i = 0; i < dim(); ++i) {
            cell[i] = c.m[i] - base_at_gen(cell_generation())[i];
            cell[i] = std::clamp<std::int64_t>(cell[i], 0, dims_[i] - 1);
        }
        return cell;
    }

    std::size_t flat(const IVec& cell) const {
        std::size_t off = 0;
        for (int i = 0; i < dim(); ++i) off += static_cast<std::size_t>(cell[i] * strides_[i]);
        return off;
    }

    IVec unflat(std::size_t at) const {
        IVec cell{};
        for (int i = 0; i < dim(); ++i) {
            cell[i] = static_cast<std::int64_t>(at) / strides_[i];
            at -= static_cast<std::size_t>(cell[i] * strides_[i]);
        }
        return cell;
    }

private:
    IVec compute_base(int gen) const {
        // index of the subtree's corner cube at generation gen; exact because
        // the shifted grids nest under the configured convention
        IVec base{};
        for (int i = 0; i < dim(); ++i) {
            std::int64_t ratio = std::int64_t{1} << (grid_.side_exp(root_.k, i) - grid_.side_exp(gen, i));
            std::int64_t num = 3 * root_.m[i] * ratio +
                               root_.shift[i] * (static_cast<std::int64_t>(grid_.offset_sign(root_.k, i)) * ratio -
                                                 grid_.offset_sign(gen, i));
            if (num % 3 != 0) throw std::invalid_argument("CellGrid: grid not nested under this convention");
            base[i] = num / 3;
        }
        return base;
    }

    GammaGrid grid_;
    DyadicGammaCube root_;
    int depth_ = 0;
    IVec dims_{};
    IVec strides_{};
    std::int64_t total_ = 0;
    Box root_box_{};
    double cell_vol_ = 0.0;
    std::vector<IVec> bases_;
};

}  // namespace varsparse
