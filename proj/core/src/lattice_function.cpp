#include "varsparse/lattice_function.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace varsparse {

LatticeFunction::LatticeFunction(Box box, IVec cells, std::vector<double> values, MonotoneDir dir)
    : box_(box), cells_(cells), dir_(dir) {
    total_ = 1;
    for (int i = 0; i < box_.dim; ++i) {
        if (cells_[i] < 1) throw std::invalid_argument("LatticeFunction: cell counts must be positive");
        total_ *= cells_[i];
        h_[i] = (box_.hi[i] - box_.lo[i]) / static_cast<double>(cells_[i]);
        if (!(h_[i] > 0.0)) throw std::invalid_argument("LatticeFunction: box must have positive extent");
    }
    cell_vol_ = 1.0;
    for (int i = 0; i < box_.dim; ++i) cell_vol_ *= h_[i];
    strides_[box_.dim - 1] = 1;
    for (int i = box_.dim - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * cells_[i + 1];
    if (static_cast<std::int64_t>(values.size()) != total_)
        throw std::invalid_argument("LatticeFunction: value count does not match lattice");
    for (double v : values)
        if (!(v >= 0.0)) throw std::invalid_argument("LatticeFunction: values must be nonnegative");
    values_ = std::move(values);
}

Vec LatticeFunction::cell_center(const IVec& idx) const {
    Vec c{};
    for (int i = 0; i < box_.dim; ++i) c[i] = box_.lo[i] + (idx[i] + 0.5) * h_[i];
    return c;
}

std::size_t LatticeFunction::flat_index(const IVec& idx) const {
    std::size_t off = 0;
    for (int i = 0; i < box_.dim; ++i) off += static_cast<std::size_t>(idx[i] * strides_[i]);
    return off;
}

double LatticeFunction::evaluate_masked(const Vec& x, const MaskRegion* mask) const {
    const int d = box_.dim;
    for (int i = 0; i < d; ++i)
        if (!(x[i] >= box_.lo[i] && x[i] < box_.hi[i])) return 0.0;

    IVec base{};
    Vec frac{};
    for (int i = 0; i < d; ++i) {
        double u = (x[i] - box_.lo[i]) / h_[i] - 0.5;
        double fl = std::floor(u);
        std::int64_t b = static_cast<std::int64_t>(fl);
        double fr = u - fl;
        if (b < 0) {
            b = 0;
            fr = 0.0;
        }
        if (b >= cells_[i] - 1) {
            b = std::max<std::int64_t>(0, cells_[i] - 2);
            fr = (cells_[i] == 1) ? 0.0 : 1.0;
        }
        base[i] = b;
        frac[i] = fr;
    }

    double acc = 0.0;
    const int corners = 1 << d;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        IVec idx = base;
        for (int i = 0; i < d; ++i) {
            if (c & (1 << i)) {
                if (cells_[i] > 1) idx[i] += 1;
                w *= frac[i];
            } else {
                w *= 1.0 - frac[i];
            }
        }
        if (w == 0.0) continue;
        double v = values_[flat_index(idx)];
        if (mask && v != 0.0 && !mask->admits(cell_center(idx))) v = 0.0;
        acc += w * v;
    }
    return acc;
}

double LatticeFunction::average_masked(const Box& q, double p, const MaskRegion* mask) const {
    if (q.dim != box_.dim) throw std::invalid_argument("average: dimension mismatch");
    if (!(q.volume() > 0.0)) throw std::invalid_argument("average: cube must have positive volume");
    if (!(p >= 1.0)) throw std::invalid_argument("average: exponent must be >= 1");

    // Denominator: count of virtual lattice cells whose center lies in q.
    // Virtual cells tile all of R^d with the box's cell geometry; f vanishes
    // off the box, so only in-box cells feed the numerator.
    double denom_cells = 1.0;
    IVec lo_idx{}, hi_idx{};
    for (int i = 0; i < box_.dim; ++i) {
        double mlo = std::ceil((q.lo[i] - box_.lo[i]) / h_[i] - 0.5);
        double mhi = std::ceil((q.hi[i] - box_.lo[i]) / h_[i] - 0.5);
        denom_cells *= (mhi - mlo);
        if (mhi <= mlo) return 0.0;
        lo_idx[i] = std::max<std::int64_t>(0, static_cast<std::int64_t>(mlo));
        hi_idx[i] = std::min<std::int64_t>(cells_[i], static_cast<std::int64_t>(mhi));
    }

    IVec span{};
    bool empty = false;
    for (int i = 0; i < box_.dim; ++i) {
        span[i] = hi_idx[i] - lo_idx[i];
        if (span[i] <= 0) empty = true;
    }
    double num = 0.0;
    if (!empty) {
        const bool p1 = (p == 1.0);
        const bool p2 = (p == 2.0);
        for_each_index(box_.dim, span, [&](const IVec& off) {
            IVec idx{};
            for (int i = 0; i < box_.dim; ++i) idx[i] = lo_idx[i] + off[i];
            double v = values_[flat_index(idx)];
            if (v == 0.0) return;
            if (mask && !mask->admits(cell_center(idx))) return;
            num += p1 ? v : (p2 ? v * v : std::pow(v, p));
        });
    }
    if (num == 0.0) return 0.0;
    double mean = num / denom_cells;
    return (p == 1.0) ? mean : std::pow(mean, 1.0 / p);
}

double LatticeFunction::lp_norm(double p) const {
    double acc = 0.0;
    for (double v : values_) acc += std::pow(v, p);
    return std::pow(acc * cell_vol_, 1.0 / p);
}

MonotoneDir LatticeFunction::is_monotonic() const {
    bool can_incr = true, can_decr = true;
    IVec span{};
    for (int axis = 0; axis < box_.dim; ++axis) {
        span = cells_;
        span[axis] -= 1;
        if (span[axis] <= 0) continue;
        for_each_index(box_.dim, span, [&](const IVec& idx) {
            IVec next = idx;
            ++next[axis];
            double a = values_[flat_index(idx)];
            double b = values_[flat_index(next)];
            if (b < a) can_incr = false;
            if (b > a) can_decr = false;
        });
        if (!can_incr && !can_decr) return MonotoneDir::Neither;
    }
    // Constants satisfy both weak inequalities and report increasing.
    if (can_incr) return MonotoneDir::Increasing;
    if (can_decr) return MonotoneDir::Decreasing;
    return MonotoneDir::Neither;
}

LatticeFunction LatticeFunction::scaled(double lambda) const {
    if (!(lambda >= 0.0)) throw std::invalid_argument("scaled: factor must be nonnegative");
    std::vector<double> vals = values_;
    for (double& v : vals) v *= lambda;
    return LatticeFunction(box_, cells_, std::move(vals), dir_);
}

LatticeFunction LatticeFunction::sum(const LatticeFunction& a, const LatticeFunction& b) {
    if (a.dim() != b.dim() || a.cell_count() != b.cell_count())
        throw std::invalid_argument("sum: lattice mismatch");
    std::vector<double> vals = a.values_;
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += b.values_[i];
    MonotoneDir dir = (a.dir_ == b.dir_) ? a.dir_ : MonotoneDir::Unknown;
    return LatticeFunction(a.box_, a.cells_, std::move(vals), dir);
}

namespace {

const char* dir_name(MonotoneDir d) {
    switch (d) {
        case MonotoneDir::Increasing: return "increasing";
        case MonotoneDir::Decreasing: return "decreasing";
        case MonotoneDir::Neither: return "neither";
        default: return "unknown";
    }
}

MonotoneDir dir_from(const std::string& s) {
    if (s == "increasing") return MonotoneDir::Increasing;
    if (s == "decreasing") return MonotoneDir::Decreasing;
    if (s == "neither") return MonotoneDir::Neither;
    return MonotoneDir::Unknown;
}

}  // namespace

void LatticeFunction::save_file(const std::string& prefix) const {
    nlohmann::ordered_json header;
    header["box"] = {{"lo", std::vector<double>(box_.lo.begin(), box_.lo.begin() + box_.dim)},
                     {"hi", std::vector<double>(box_.hi.begin(), box_.hi.begin() + box_.dim)}};
    header["resolution"] = std::vector<std::int64_t>(cells_.begin(), cells_.begin() + box_.dim);
    header["monotone_dir"] = dir_name(dir_);
    std::ofstream jh(prefix + ".json");
    if (!jh) throw std::runtime_error("LatticeFunction::save_file: cannot open " + prefix + ".json");
    jh << header.dump(2) << "\n";

    std::ofstream csv(prefix + ".csv");
    if (!csv) throw std::runtime_error("LatticeFunction::save_file: cannot open " + prefix + ".csv");
    csv.precision(17);
    for (double v : values_) csv << v << "\n";
}

LatticeFunction LatticeFunction::load_file(const std::string& prefix) {
    std::ifstream jh(prefix + ".json");
    if (!jh) throw std::runtime_error("LatticeFunction::load_file: cannot open " + prefix + ".json");
    nlohmann::ordered_json header;
    jh >> header;
    auto lo = header.at("box").at("lo").get<std::vector<double>>();
    auto hi = header.at("box").at("hi").get<std::vector<double>>();
    auto res = header.at("resolution").get<std::vector<std::int64_t>>();
    Box box;
    box.dim = static_cast<int>(lo.size());
    IVec cells{};
    std::int64_t total = 1;
    for (int i = 0; i < box.dim; ++i) {
        box.lo[i] = lo[static_cast<std::size_t>(i)];
        box.hi[i] = hi[static_cast<std::size_t>(i)];
        cells[i] = res[static_cast<std::size_t>(i)];
        total *= cells[i];
    }
    std::ifstream csv(prefix + ".csv");
    if (!csv) throw std::runtime_error("LatticeFunction::load_file: cannot open " + prefix + ".csv");
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(total));
    double v;
    while (csv >> v) vals.push_back(v);
    return LatticeFunction(box, cells, std::move(vals), dir_from(header.value("monotone_dir", "unknown")));
}

LatticeFunction make_test_function(TestFunctionKind kind, const Box& box, const IVec& cells,
                                   const TestFunctionParams& params) {
    const int d = box.dim;
    switch (kind) {
        case TestFunctionKind::Constant: {
            if (!(params.constant >= 0.0)) throw std::invalid_argument("make_test_function: constant must be >= 0");
            return LatticeFunction::from_sampler(
                box, cells, [&](const Vec&) { return params.constant; }, MonotoneDir::Increasing);
        }
        case TestFunctionKind::LinearRamp: {
            for (int i = 0; i < d; ++i)
                if (params.ramp_gradient[i] < 0.0)
                    throw std::invalid_argument("make_test_function: ramp gradient must be nonnegative");
            return LatticeFunction::from_sampler(
                box, cells,
                [&](const Vec& x) {
                    double v = params.ramp_offset;
                    for (int i = 0; i < d; ++i) v += params.ramp_gradient[i] * x[i];
                    return std::max(0.0, v);
                },
                MonotoneDir::Increasing);
        }
        case TestFunctionKind::SigmoidProduct: {
            for (int i = 0; i < d; ++i)
                if (!(params.sigmoid_rate[i] > 0.0))
                    throw std::invalid_argument("make_test_function: sigmoid rates must be positive");
            return LatticeFunction::from_sampler(
                box, cells,
                [&](const Vec& x) {
                    double v = 1.0;
                    for (int i = 0; i < d; ++i)
                        v *= 1.0 / (1.0 + std::exp(-params.sigmoid_rate[i] * (x[i] - params.sigmoid_center[i])));
                    return v;
                },
                MonotoneDir::Increasing);
        }
        case TestFunctionKind::UpperSetIndicator: {
            return LatticeFunction::from_sampler(
                box, cells,
                [&](const Vec& x) {
                    for (int i = 0; i < d; ++i)
                        if (x[i] < params.threshold[i]) return 0.0;
                    return 1.0;
                },
                MonotoneDir::Increasing);
        }
        case TestFunctionKind::RandomMonotone: {
            // d-dimensional cumulative sum of nonnegative increments: the
            // running sum over the down-set of each lattice node is monotone
            // in the coordinatewise order by construction.
            std::mt19937_64 rng(params.seed);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            std::int64_t total = 1;
            for (int i = 0; i < d; ++i) total *= cells[i];
            std::vector<double> incr(static_cast<std::size_t>(total));
            for (auto& v : incr) v = unif(rng);
            std::vector<double> vals = std::move(incr);
            // prefix sums along each axis in turn
            IVec strides{};
            strides[d - 1] = 1;
            for (int i = d - 2; i >= 0; --i) strides[i] = strides[i + 1] * cells[i + 1];
            for (int axis = 0; axis < d; ++axis) {
                IVec span = cells;
                span[axis] -= 1;
                if (span[axis] <= 0) continue;
                // for_each_index counts each coordinate upward, so vals[prev]
                // is fully accumulated before vals[at] reads it
                for_each_index(d, span, [&](const IVec& idx) {
                    std::size_t at = 0, prev = 0;
                    for (int i = 0; i < d; ++i) {
                        std::int64_t coord = (i == axis) ? idx[i] + 1 : idx[i];
                        at += static_cast<std::size_t>(coord * strides[i]);
                        prev += static_cast<std::size_t>(idx[i] * strides[i]);
                    }
                    vals[at] += vals[prev];
                });
            }
            double peak = 0.0;
            for (double v : vals) peak = std::max(peak, v);
            if (peak > 0.0)
                for (double& v : vals) v /= peak;
            return LatticeFunction(box, cells, std::move(vals), MonotoneDir::Increasing);
        }
    }
    throw std::invalid_argument("make_test_function: unknown kind");
}

}  // namespace varsparse
