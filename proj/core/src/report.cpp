#include "varsparse/report.hpp"

#include <fstream>
#include <stdexcept>

namespace varsparse {

CheckResult& SuiteReport::add(std::string name, std::string kind) {
    // callers hold references across later add() calls
    if (checks.capacity() < 64) checks.reserve(64);
    checks.push_back(CheckResult{std::move(name), std::move(kind), true, nlohmann::ordered_json::object()});
    return checks.back();
}

bool SuiteReport::pass() const {
    for (const auto& c : checks)
        if (c.kind == "asserted" && !c.pass) return false;
    return true;
}

nlohmann::ordered_json SuiteReport::to_json() const {
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["pass"] = pass();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["kind"] = c.kind;
        cj["pass"] = c.pass;
        cj["details"] = c.details;
        arr.push_back(cj);
    }
    j["checks"] = arr;
    return j;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    out.precision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

nlohmann::ordered_json cube_record(const DyadicGammaCube& q, int dim) {
    nlohmann::ordered_json j;
    j["grid_id"] = q.grid_id;
    j["k"] = q.k;
    j["m"] = std::vector<std::int64_t>(q.m.begin(), q.m.begin() + dim);
    std::vector<int> shift(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) shift[static_cast<std::size_t>(i)] = q.shift[i];
    j["shift"] = shift;
    return j;
}

nlohmann::ordered_json family_record(const SparseFamily& fam) {
    const double cellvol = fam.lattice.cell_volume();
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : fam.nodes) {
        nlohmann::ordered_json e;
        e["cube"] = cube_record(n.cube, fam.lattice.dim());
        e["level"] = n.level;
        e["witness_measure"] = static_cast<double>(n.witness_cells) * cellvol;
        if (fam.finalized) {
            e["enlarged_l"] = n.enlarged.l;
            e["certified_witness_measure"] = static_cast<double>(n.reselected_cells) * cellvol;
        }
        nodes.push_back(e);
    }
    nlohmann::ordered_json j;
    j["finalized"] = fam.finalized;
    j["eta_construction"] = fam.eta_construction;
    if (fam.finalized) {
        j["eta_inherited"] = fam.eta_inherited;
        j["eta_certified"] = fam.eta_certified;
        j["reselection_ok"] = fam.reselection_ok;
    }
    j["nodes"] = nodes;
    return j;
}

}  // namespace varsparse
