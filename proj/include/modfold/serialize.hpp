#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "certificates.hpp"
#include "critical.hpp"
#include "errors.hpp"
#include "fold.hpp"
#include "separated_set.hpp"
#include "signal.hpp"
#include "unfolding.hpp"

namespace modfold {

using json = nlohmann::json;

inline std::string g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline json to_json(const SeparatedSet& X) {
    if (X.is_uniform())
        return json{{"alpha", X.alpha()},
                    {"range", json::array({X.k_first(), X.k_last()})}};
    return json{{"points", X.points()}};
}

inline SeparatedSet separated_set_from_json(const json& j) {
    if (j.contains("alpha")) {
        if (!j.contains("range") || !j["range"].is_array() || j["range"].size() != 2)
            throw usage_error("separated_set: uniform form needs \"range\": [first, last]");
        return SeparatedSet::uniform(j["alpha"].get<double>(),
                                     j["range"][0].get<std::int64_t>(),
                                     j["range"][1].get<std::int64_t>());
    }
    if (j.contains("points"))
        return SeparatedSet::from_points(j["points"].get<std::vector<double>>());
    throw usage_error("separated_set: need either {alpha, range} or {points}");
}

inline json to_json(const BandlimitedSignal& f) {
    json atoms = json::array();
    for (const Atom& a : f.atoms)
        atoms.push_back(json::array({a.center, a.coeff.real(), a.coeff.imag()}));
    return json{{"omega", f.omega}, {"atoms", atoms}};
}

inline BandlimitedSignal signal_from_json(const json& j) {
    BandlimitedSignal f;
    if (!j.contains("omega") || !j.contains("atoms"))
        throw usage_error("signal: need {omega, atoms}");
    f.omega = j["omega"].get<double>();
    for (const json& a : j["atoms"]) {
        if (!a.is_array() || a.size() != 3)
            throw usage_error("signal: atom entries are [center, re, im]");
        f.atoms.push_back({a[0].get<double>(),
                           Scalar(a[1].get<double>(), a[2].get<double>())});
    }
    return f;
}

inline json to_json(const FoldedSamples& s) {
    json vals = json::array();
    for (const Scalar& v : s.values)
        vals.push_back(json::array({v.real(), v.imag()}));
    return json{{"lambda", s.lambda}, {"values", vals}};
}

inline FoldedSamples folded_samples_from_json(const json& j) {
    FoldedSamples s;
    if (!j.contains("lambda") || !j.contains("values"))
        throw usage_error("folded_samples: need {lambda, values}");
    s.lambda = j["lambda"].get<double>();
    for (const json& v : j["values"]) {
        if (!v.is_array() || v.size() != 2)
            throw usage_error("folded_samples: value entries are [re, im]");
        s.values.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    return s;
}

// The full certificate record: identity plus the derived critical-function
// figures at the given threshold.
inline json certificate_json(const IntegerCertificate& cert, double energy,
                             double folded_norm) {
    json j{{"alpha", cert.alpha},
           {"construction", cert.construction},
           {"N", cert.order},
           {"coeffs", cert.coeffs},
           {"residual", cert.residual},
           {"energy", energy},
           {"folded_norm", folded_norm}};
    if (!cert.coeffs_imag.empty()) j["coeffs_imag"] = cert.coeffs_imag;
    return j;
}

inline json to_json(const RecoveryReport& rep) {
    return json{{"recovered", to_json(rep.recovered)},
                {"coeffs", rep.coeffs},
                {"atom_grid", rep.atom_grid},
                {"fold_counts", rep.fold_counts},
                {"peak_set", rep.peak_set},
                {"residual", rep.residual},
                {"lipschitz_estimate", rep.lipschitz_estimate},
                {"reduced_frame_lower", rep.reduced_frame_lower},
                {"peaks_used", rep.peaks_used},
                {"max_peaks", rep.max_peaks},
                {"warnings", rep.warnings}};
}

inline std::string stability_table_csv(const StabilityTable& table) {
    std::string out = "# seed=" + std::to_string(table.seed) + "\n";
    out += "trial,toral_dist,l2_error,ratio,lipschitz_estimate,peaks_used\n";
    for (const StabilityRow& r : table.rows) {
        out += std::to_string(r.trial);
        out += ',';
        out += g12(r.toral_dist);
        out += ',';
        out += g12(r.l2_error);
        out += ',';
        out += g12(r.ratio);
        out += ',';
        out += g12(r.lipschitz_estimate);
        out += ',';
        out += std::to_string(r.peaks_used);
        out += '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw numerical_error("short write: " + path);
}

}
