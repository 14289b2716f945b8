#pragma once

#include "varsparse/types.hpp"

#include <random>

namespace varsparse {

enum class MonotoneDir { Increasing, Decreasing, Unknown, Neither };

/// Nonnegative sampled function on a uniform axis-aligned lattice of cells;
/// samples live at cell centers. Evaluation is multilinear between centers,
/// constant in the half-cell margin, and zero outside the bounding box, so a
/// LatticeFunction is globally defined with compact support.
class LatticeFunction {
public:
    LatticeFunction() = default;
    LatticeFunction(Box box, IVec cells, std::vector<double> values, MonotoneDir dir = MonotoneDir::Unknown);

    template <class F>
    static LatticeFunction from_sampler(Box box, IVec cells, F&& f, MonotoneDir dir = MonotoneDir::Unknown) {
        std::vector<double> vals;
        std::int64_t total = 1;
        for (int i = 0; i < box.dim; ++i) total *= cells[i];
        vals.reserve(static_cast<std::size_t>(total));
        for_each_index(box.dim, cells, [&](const IVec& idx) {
            Vec c{};
            for (int i = 0; i < box.dim; ++i)
                c[i] = box.lo[i] + (idx[i] + 0.5) * (box.hi[i] - box.lo[i]) / static_cast<double>(cells[i]);
            vals.push_back(f(c));
        });
        return LatticeFunction(box, cells, std::move(vals), dir);
    }

    int dim() const { return box_.dim; }
    const Box& box() const { return box_; }
    const IVec& cells() const { return cells_; }
    std::int64_t cell_count() const { return total_; }
    double cell_volume() const { return cell_vol_; }
    double cell_width(int axis) const { return h_[axis]; }
    const std::vector<double>& values() const { return values_; }
    MonotoneDir declared_dir() const { return dir_; }

    Vec cell_center(const IVec& idx) const;
    std::size_t flat_index(const IVec& idx) const;
    double sample(const IVec& idx) const { return values_[flat_index(idx)]; }

    /// Multilinear interpolation; zero outside the box.
    double evaluate(const Vec& x) const { return evaluate_masked(x, nullptr); }

    /// Same, with samples outside `mask` read as zero.
    double evaluate_masked(const Vec& x, const MaskRegion* mask) const;

    /// (|Q|^{-1} int_Q f^p)^{1/p} by composite midpoint quadrature at lattice
    /// resolution; the lattice extends virtually (f = 0) beyond the box.
    double average(const Box& q, double p) const { return average_masked(q, p, nullptr); }
    double average_masked(const Box& q, double p, const MaskRegion* mask) const;

    /// L^p norm over the box at lattice resolution.
    double lp_norm(double p) const;

    /// Exhaustive scan of lattice-adjacent comparable pairs.
    MonotoneDir is_monotonic() const;

    /// Copy with samples scaled by lambda >= 0.
    LatticeFunction scaled(double lambda) const;

    /// Pointwise sum; boxes and resolutions must match.
    static LatticeFunction sum(const LatticeFunction& a, const LatticeFunction& b);

    /// Store as <prefix>.json (box, resolution, monotone_dir) plus
    /// <prefix>.csv (flat row-major sample dump); load_file reads both back.
    void save_file(const std::string& prefix) const;
    static LatticeFunction load_file(const std::string& prefix);

private:
    Box box_{};
    IVec cells_{};
    IVec strides_{};
    std::int64_t total_ = 0;
    Vec h_{};
    double cell_vol_ = 1.0;
    std::vector<double> values_;
    MonotoneDir dir_ = MonotoneDir::Unknown;
};

enum class TestFunctionKind { Constant, LinearRamp, SigmoidProduct, UpperSetIndicator, RandomMonotone };

struct TestFunctionParams {
    double constant = 1.0;
    Vec ramp_gradient{};       // nonnegative entries
    double ramp_offset = 0.0;  // clamped at zero
    Vec threshold{};           // upper-set corner
    Vec sigmoid_rate{};        // positive entries
    Vec sigmoid_center{};
    std::uint64_t seed = 1;
};

/// Monotone-increasing nonnegative test functions on the given lattice.
LatticeFunction make_test_function(TestFunctionKind kind, const Box& box, const IVec& cells,
                                   const TestFunctionParams& params);

}  // namespace varsparse
