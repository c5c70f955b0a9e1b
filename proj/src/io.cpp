#include "qmix/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qmix {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json manifest_json(const RunManifest& m) {
    json j;
    j["tool"] = kToolName;
    j["version"] = m.tool_version;
    j["command"] = m.command;
    j["generator"] = m.generator_id;
    j["seed"] = {{"master_seed", m.seed.master_seed}, {"stream_index", m.seed.stream_index}};
    j["params"] = m.params;
    return j;
}

std::string csv_manifest_header(const RunManifest& m) {
    std::ostringstream os;
    os << "# " << kToolName << " " << m.tool_version << "\n";
    os << "# command: " << m.command << "\n";
    os << "# generator: " << m.generator_id << "\n";
    os << "# seed: master_seed=" << m.seed.master_seed
       << " stream_index=" << m.seed.stream_index << "\n";
    for (const auto& [k, v] : m.params) os << "# " << k << ": " << v << "\n";
    return os.str();
}

std::string csv_row(const MeasureRecord& r) {
    std::ostringstream os;
    os << format_double(r.C) << ',' << format_double(r.E) << ',' << format_double(r.R) << ','
       << format_double(r.lambda_max) << ',' << format_double(r.SL) << ','
       << format_double(r.cond_renyi_inf_AB) << ',' << format_double(r.cond_renyi_inf_BA) << ','
       << format_double(r.F_EF) << ',' << (r.entangled ? 1 : 0) << ','
       << (r.classical_ineq_hold ? 1 : 0);
    return os.str();
}

json record_json(const MeasureRecord& r) {
    json j;
    j["C"] = r.C;
    j["E"] = r.E;
    j["R"] = r.R;
    j["lambda_max"] = r.lambda_max;
    j["SL"] = r.SL;
    j["cond_renyi_inf_AB"] = r.cond_renyi_inf_AB;
    j["cond_renyi_inf_BA"] = r.cond_renyi_inf_BA;
    if (!r.cond_tsallis.empty()) {
        json t = json::object();
        for (const auto& p : r.cond_tsallis) {
            char key[32];
            std::snprintf(key, sizeof key, "%g", p.q);
            t[key] = {{"AB", p.ab}, {"BA", p.ba}};
        }
        j["cond_tsallis"] = t;
    }
    j["F_EF"] = r.F_EF;
    j["entangled"] = r.entangled;
    j["classical_ineq_hold"] = r.classical_ineq_hold;
    return j;
}

json bin_series_json(const BinSeries& b) {
    json j;
    j["bin_centers"] = b.bin_centers;
    j["counts"] = b.counts;
    json mc = json::array();
    for (double v : b.max_C) {
        if (std::isnan(v))
            mc.push_back(nullptr);
        else
            mc.push_back(v);
    }
    j["max_C"] = mc;
    for (const auto& [name, vals] : b.aux) {
        json a = json::array();
        for (double v : vals) {
            if (std::isnan(v))
                a.push_back(nullptr);
            else
                a.push_back(v);
        }
        j[name] = a;
    }
    return j;
}

json density_to_json(const Mat4& m) {
    json entries = json::array();
    for (const cplx& v : m.e) entries.push_back({v.real(), v.imag()});
    return json{{"dim", 4}, {"entries", entries}};
}

Mat4 density_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        throw std::invalid_argument("density file: expected {\"dim\":4,\"entries\":[...]}");
    if (j.at("dim").get<int>() != 4)
        throw std::invalid_argument("density file: dim must be 4");
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != 16)
        throw std::invalid_argument("density file: entries must hold 16 [re,im] pairs");
    Mat4 m;
    for (std::size_t i = 0; i < 16; ++i) {
        const auto& p = entries.at(i);
        if (!p.is_array() || p.size() != 2)
            throw std::invalid_argument("density file: entry " + std::to_string(i) +
                                        " is not a [re,im] pair");
        m.e[i] = cplx{p.at(0).get<double>(), p.at(1).get<double>()};
    }
    return m;
}

Mat4 load_density_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open state file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("state file " + path + " is not valid JSON: " + e.what());
    }
    return density_from_json(j);
}

}  // namespace qmix
