#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "certificates.hpp"
#include "critical.hpp"
#include "prolate.hpp"
#include "serialize.hpp"
#include "unfolding.hpp"
#include "version.hpp"

namespace modfold {

enum class ExperimentKind {
    decay_curve,
    prolate_spectrum,
    svp_compare,
    witness,
    unfold_demo,
    density_scan,
};

inline const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::decay_curve: return "decay_curve";
        case ExperimentKind::prolate_spectrum: return "prolate_spectrum";
        case ExperimentKind::svp_compare: return "svp_compare";
        case ExperimentKind::witness: return "witness";
        case ExperimentKind::unfold_demo: return "unfold_demo";
        case ExperimentKind::density_scan: return "density_scan";
    }
    throw internal_error("kind_name: unhandled kind");
}

inline const std::vector<ExperimentKind>& all_kinds() {
    static const std::vector<ExperimentKind> kinds = {
        ExperimentKind::decay_curve,  ExperimentKind::prolate_spectrum,
        ExperimentKind::svp_compare,  ExperimentKind::witness,
        ExperimentKind::unfold_demo,  ExperimentKind::density_scan,
    };
    return kinds;
}

inline ExperimentKind kind_from_name(const std::string& name) {
    for (ExperimentKind k : all_kinds())
        if (name == kind_name(k)) return k;
    std::string msg = "config.kind: unknown kind \"" + name + "\" (expected one of";
    for (ExperimentKind k : all_kinds()) msg += std::string(" ") + kind_name(k);
    throw usage_error(msg + ")");
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::decay_curve;
    json parameters;
    std::uint64_t seed = 0;
};

namespace detail {

struct FieldSpec {
    const char* name;
    const char* type;   // "number" | "integer" | "array"
    bool required;
    json def;
};

inline const std::vector<FieldSpec>& schema_for(ExperimentKind k) {
    static const std::vector<FieldSpec> decay = {
        {"alpha", "number", true, {}},
        {"n_max", "integer", false, 30},
    };
    static const std::vector<FieldSpec> spectrum = {
        {"alpha", "number", true, {}},
        {"n", "integer", true, {}},
        {"epsilon", "number", false, 0.1},
    };
    static const std::vector<FieldSpec> svp = {
        {"alpha", "number", true, {}},
        {"n_max", "integer", false, 10},
        {"bound", "integer", false, 3},
        {"delta", "number", false, 0.75},
    };
    static const std::vector<FieldSpec> wit = {
        {"alpha", "number", true, {}},
        {"lambda", "number", false, 0.5},
        {"target", "number", false, 1e-3},
        {"floor", "number", false, 1.0},
        {"max_order", "integer", false, 64},
    };
    static const std::vector<FieldSpec> demo = {
        {"omega", "number", false, 1.0},
        {"lambda", "number", false, 0.5},
        {"amplitude", "number", false, 0.9},
        {"spacing", "number", false, 0.5},
        {"window", "integer", false, 256},
        {"energy_bound", "number", false, 1.0},
        {"trials", "integer", false, 0},
    };
    static const std::vector<FieldSpec> density = {
        {"spacing", "number", false, 0.5},
        {"window", "integer", false, 256},
        {"radii", "array", false, json::array({2.0, 4.0, 8.0, 16.0})},
    };
    switch (k) {
        case ExperimentKind::decay_curve: return decay;
        case ExperimentKind::prolate_spectrum: return spectrum;
        case ExperimentKind::svp_compare: return svp;
        case ExperimentKind::witness: return wit;
        case ExperimentKind::unfold_demo: return demo;
        case ExperimentKind::density_scan: return density;
    }
    throw internal_error("schema_for: unhandled kind");
}

inline bool field_type_ok(const json& v, const char* type) {
    std::string t(type);
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "array") {
        if (!v.is_array()) return false;
        for (const json& e : v)
            if (!e.is_number()) return false;
        return true;
    }
    return false;
}

inline void validate_parameters(ExperimentKind kind, json& params) {
    const auto& schema = schema_for(kind);
    for (const auto& item : params.items()) {
        bool known = false;
        for (const FieldSpec& f : schema)
            if (item.key() == f.name) {
                known = true;
                break;
            }
        if (!known)
            throw usage_error("parameters." + item.key() + ": unknown field for kind " +
                              kind_name(kind));
    }
    for (const FieldSpec& f : schema) {
        if (!params.contains(f.name)) {
            if (f.required)
                throw usage_error(std::string("parameters.") + f.name +
                                  ": missing required " + f.type);
            params[f.name] = f.def;
            continue;
        }
        if (!field_type_ok(params[f.name], f.type))
            throw usage_error(std::string("parameters.") + f.name + ": expected " + f.type);
    }
}

inline long long positive_int(const json& params, const char* name) {
    long long v = params[name].get<long long>();
    if (v < 1)
        throw usage_error(std::string("parameters.") + name + ": must be at least 1");
    return v;
}

}

inline ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw usage_error("config: expected a JSON object");
    for (const auto& item : doc.items())
        if (item.key() != "kind" && item.key() != "parameters" && item.key() != "seed")
            throw usage_error("config." + item.key() + ": unknown field");
    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw usage_error("config.kind: missing required string");
    ExperimentConfig cfg;
    cfg.kind = kind_from_name(doc["kind"].get<std::string>());
    cfg.parameters = doc.contains("parameters") ? doc["parameters"] : json::object();
    if (!cfg.parameters.is_object())
        throw usage_error("config.parameters: expected an object");
    if (doc.contains("seed")) {
        const json& s = doc["seed"];
        if (!s.is_number_unsigned() &&
            !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
            throw usage_error("config.seed: expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    detail::validate_parameters(cfg.kind, cfg.parameters);
    return cfg;
}

inline std::vector<std::string> planned_stages(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::decay_curve:
            return {"validate config", "binomial certificate sweep",
                    "write decay_curve.csv", "render plot data"};
        case ExperimentKind::prolate_spectrum:
            return {"validate config", "prolate eigendecomposition",
                    "write prolate_spectrum.csv + prolate_spectrum.json",
                    "render plot data"};
        case ExperimentKind::svp_compare:
            return {"validate config", "per-order bruteforce vs LLL shortest vectors",
                    "write svp_compare.csv", "render plot data"};
        case ExperimentKind::witness:
            return {"validate config", "binomial witness search", "write witness.json"};
        case ExperimentKind::unfold_demo:
            return {"validate config", "fold + unfold round trip",
                    "write unfold_demo.json (+ unfold_stability.csv when trials > 0)",
                    "render plot data"};
        case ExperimentKind::density_scan:
            return {"validate config", "counting-rate scan over radii",
                    "write density_scan.csv", "render plot data"};
    }
    throw internal_error("planned_stages: unhandled kind");
}

struct OutputRecord {
    std::string path;   // relative to the run directory
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string kind;
    json config;
    std::string version;
    std::string timestamp;
    std::vector<OutputRecord> outputs;
    std::vector<std::pair<std::string, double>> stage_seconds;
};

inline json to_json(const RunManifest& m) {
    json outs = json::array();
    for (const OutputRecord& o : m.outputs)
        outs.push_back(json{{"path", o.path}, {"bytes", o.bytes}});
    json stages = json::object();
    for (const auto& s : m.stage_seconds) stages[s.first] = s.second;
    return json{{"kind", m.kind},       {"config", m.config},
                {"version", m.version}, {"timestamp", m.timestamp},
                {"outputs", outs},      {"stage_seconds", stages}};
}

namespace detail {

class StageClock {
public:
    double lap() {
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline std::string iso_timestamp_utc() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
#if defined(_WIN32)
    gmtime_s(&tm, &t);
#else
    gmtime_r(&t, &tm);
#endif
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("render_plotdata: cannot open " + path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    std::vector<std::string> lines;
    std::string cur;
    for (char c : content) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);

    CsvTable table;
    std::size_t lineno = 0;
    for (const std::string& line : lines) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        for (char c : line) {
            if (c == ',') {
                cells.push_back(cell);
                cell.clear();
            } else {
                cell.push_back(c);
            }
        }
        cells.push_back(cell);
        if (table.header.empty()) {
            table.header = cells;
            continue;
        }
        if (cells.size() != table.header.size())
            throw usage_error("render_plotdata: malformed row at line " +
                              std::to_string(lineno) + " of " + path);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& s : cells) {
            const char* begin = s.c_str();
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin || *end != '\0')
                throw usage_error("render_plotdata: non-numeric cell at line " +
                                  std::to_string(lineno) + " of " + path);
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty())
        throw usage_error("render_plotdata: empty CSV " + path);
    if (table.rows.empty())
        throw usage_error("render_plotdata: no data rows in " + path);
    return table;
}

}

// Plot-neutral digest of an experiment CSV: x column, named y series, and a
// log-scale flag.  Series selection is keyed off the header so the decay
// curves come out as the two log-scale norms and the eigenvalue spectrum
// stays linear.
inline json plotdata_from_csv(const std::string& csv_path) {
    detail::CsvTable t = detail::parse_csv(csv_path);
    auto column = [&](std::size_t j) {
        std::vector<double> v;
        v.reserve(t.rows.size());
        for (const auto& row : t.rows) v.push_back(row[j]);
        return v;
    };
    auto find = [&](const char* name) -> std::ptrdiff_t {
        for (std::size_t j = 0; j < t.header.size(); ++j)
            if (t.header[j] == name) return static_cast<std::ptrdiff_t>(j);
        return -1;
    };

    std::vector<std::size_t> series_cols;
    bool log_y = false;
    std::ptrdiff_t proj = find("proj_norm"), res = find("residual");
    std::ptrdiff_t bf = find("bruteforce"), ll = find("lll");
    if (proj >= 0 && res >= 0) {
        series_cols = {static_cast<std::size_t>(proj), static_cast<std::size_t>(res)};
        log_y = true;
    } else if (bf >= 0 && ll >= 0) {
        series_cols = {static_cast<std::size_t>(bf), static_cast<std::size_t>(ll)};
        log_y = true;
    } else {
        for (std::size_t j = 1; j < t.header.size(); ++j) series_cols.push_back(j);
    }

    json series = json::array();
    for (std::size_t j : series_cols)
        series.push_back(json{{"name", t.header[j]}, {"y", column(j)}});
    return json{{"x_label", t.header[0]},
                {"x", column(0)},
                {"series", series},
                {"log_y", log_y}};
}

inline std::string render_plotdata(const std::string& csv_path) {
    json plot = plotdata_from_csv(csv_path);
    std::filesystem::path out(csv_path);
    out.replace_extension(".plot.json");
    write_text_file(out.string(), plot.dump(2) + "\n");
    return out.string();
}

namespace detail {

inline void run_decay_curve(const json& P, const std::filesystem::path& dir,
                            RunManifest& man, std::vector<std::string>& files) {
    StageClock clock;
    double alpha = P["alpha"].get<double>();
    long long n_max = positive_int(P, "n_max");
    std::string csv = "N,proj_norm,residual,bound\n";
    for (long long N = 1; N <= n_max; ++N) {
        auto n = static_cast<std::size_t>(N);
        IntegerCertificate cert = binomial_certificate(n, alpha);
        double norm_sq = central_binomial(n);
        double proj = std::sqrt(std::max(0.0, norm_sq - cert.residual * cert.residual));
        csv += std::to_string(N) + ',' + g12(proj) + ',' + g12(cert.residual) + ',' +
               g12(binomial_residual_bound(n, alpha)) + '\n';
    }
    man.stage_seconds.emplace_back("compute", clock.lap());
    write_text_file((dir / "decay_curve.csv").string(), csv);
    files.push_back("decay_curve.csv");
    man.stage_seconds.emplace_back("write", clock.lap());
}

inline void run_prolate_spectrum(const json& P, const std::filesystem::path& dir,
                                 RunManifest& man, std::vector<std::string>& files) {
    StageClock clock;
    double alpha = P["alpha"].get<double>();
    auto n = static_cast<std::size_t>(positive_int(P, "n"));
    double epsilon = P["epsilon"].get<double>();
    ProlateMatrix Q = prolate_matrix(alpha, n);
    SpectrumReport rep = spectrum(Q, epsilon);
    double mink = minkowski_bound(Q);
    man.stage_seconds.emplace_back("compute", clock.lap());

    std::string csv = "k,mu_k\n";
    for (std::size_t k = 0; k < rep.eigenvalues.size(); ++k)
        csv += std::to_string(k) + ',' + g12(rep.eigenvalues[k]) + '\n';
    write_text_file((dir / "prolate_spectrum.csv").string(), csv);
    files.push_back("prolate_spectrum.csv");

    json j{{"alpha", rep.alpha},
           {"N", rep.N},
           {"epsilon", rep.epsilon},
           {"plunge_index", rep.plunge_index},
           {"log_det", rep.log_det},
           {"fitted_decay_rate", rep.fitted_decay_rate},
           {"minkowski_bound", mink}};
    write_text_file((dir / "prolate_spectrum.json").string(), j.dump(2) + "\n");
    files.push_back("prolate_spectrum.json");
    man.stage_seconds.emplace_back("write", clock.lap());
}

inline void run_svp_compare(const json& P, const std::filesystem::path& dir,
                            RunManifest& man, std::vector<std::string>& files) {
    StageClock clock;
    double alpha = P["alpha"].get<double>();
    long long n_max = positive_int(P, "n_max");
    if (n_max > 14)
        throw usage_error("parameters.n_max: bruteforce comparison is capped at 14");
    long long bound = positive_int(P, "bound");
    double delta = P["delta"].get<double>();

    std::vector<std::future<std::pair<double, double>>> jobs;
    jobs.reserve(static_cast<std::size_t>(n_max));
    for (long long N = 1; N <= n_max; ++N)
        jobs.push_back(std::async(std::launch::async, [alpha, bound, delta, N] {
            auto n = static_cast<std::size_t>(N);
            double bf = svp_certificate(alpha, n, svp_bruteforce(bound)).residual;
            double ll = svp_certificate(alpha, n, svp_lll(delta)).residual;
            return std::make_pair(bf, ll);
        }));

    std::string csv = "N,bruteforce,lll,lll_over_bruteforce\n";
    for (long long N = 1; N <= n_max; ++N) {
        auto [bf, ll] = jobs[static_cast<std::size_t>(N - 1)].get();
        csv += std::to_string(N) + ',' + g12(bf) + ',' + g12(ll) + ',' + g12(ll / bf) + '\n';
    }
    man.stage_seconds.emplace_back("compute", clock.lap());
    write_text_file((dir / "svp_compare.csv").string(), csv);
    files.push_back("svp_compare.csv");
    man.stage_seconds.emplace_back("write", clock.lap());
}

inline void run_witness(const json& P, const std::filesystem::path& dir,
                        RunManifest& man, std::vector<std::string>& files) {
    StageClock clock;
    WitnessReport rep = instability_witness(
        P["alpha"].get<double>(), P["lambda"].get<double>(), P["target"].get<double>(),
        P["floor"].get<double>(),
        static_cast<std::size_t>(positive_int(P, "max_order")));
    man.stage_seconds.emplace_back("compute", clock.lap());

    json j = certificate_json(rep.certificate, rep.witness_energy, rep.witness_folded_norm);
    j["met_target"] = rep.met_target;
    j["target_folded_norm"] = rep.target_folded_norm;
    j["floor_energy"] = rep.floor_energy;
    write_text_file((dir / "witness.json").string(), j.dump(2) + "\n");
    files.push_back("witness.json");
    man.stage_seconds.emplace_back("write", clock.lap());
}

inline void run_unfold_demo(const json& P, const std::filesystem::path& dir,
                            RunManifest& man, std::vector<std::string>& files,
                            std::uint64_t seed) {
    StageClock clock;
    double omega = P["omega"].get<double>();
    double lambda = P["lambda"].get<double>();
    double amplitude = P["amplitude"].get<double>();
    double spacing = P["spacing"].get<double>();
    long long window = positive_int(P, "window");
    double energy_bound = P["energy_bound"].get<double>();
    long long trials = P["trials"].get<long long>();
    if (trials < 0) throw usage_error("parameters.trials: must be non-negative");
    if (!(omega > 0.0)) throw usage_error("parameters.omega: must be positive");

    SeparatedSet X = SeparatedSet::uniform(spacing, -window / 2, window / 2 - 1);
    BandlimitedSignal f;
    f.omega = omega;
    f.atoms.push_back({0.0, Scalar(amplitude / omega, 0.0)});
    FoldedSamples folded = fold_samples(f, X, lambda);

    UnfoldConfig cfg;
    cfg.lambda = lambda;
    cfg.energy_bound = energy_bound;
    cfg.omega = omega;
    cfg.X = X;
    RecoveryReport rep = unfold(folded, cfg);

    double truth_sq = 0.0, err_sq = 0.0;
    for (std::size_t i = 0; i < rep.atom_grid.size(); ++i) {
        double truth = std::abs(rep.atom_grid[i]) < 1e-9 ? amplitude / std::sqrt(omega) : 0.0;
        double d = rep.coeffs[i] - truth;
        truth_sq += truth * truth;
        err_sq += d * d;
    }
    double rel_error = truth_sq > 0.0 ? std::sqrt(err_sq / truth_sq)
                                      : std::numeric_limits<double>::infinity();
    man.stage_seconds.emplace_back("unfold", clock.lap());

    json j{{"input",
            json{{"omega", omega},
                 {"lambda", lambda},
                 {"amplitude", amplitude},
                 {"spacing", spacing},
                 {"window", window},
                 {"energy_bound", energy_bound}}},
           {"relative_error", rel_error},
           {"report", to_json(rep)}};
    write_text_file((dir / "unfold_demo.json").string(), j.dump(2) + "\n");
    files.push_back("unfold_demo.json");

    if (trials > 0) {
        StabilityTable table =
            stability_probe(cfg, static_cast<std::size_t>(trials), seed);
        write_text_file((dir / "unfold_stability.csv").string(),
                        stability_table_csv(table));
        files.push_back("unfold_stability.csv");
        man.stage_seconds.emplace_back("stability_probe", clock.lap());
    }
    man.stage_seconds.emplace_back("write", clock.lap());
}

inline void run_density_scan(const json& P, const std::filesystem::path& dir,
                             RunManifest& man, std::vector<std::string>& files) {
    StageClock clock;
    double spacing = P["spacing"].get<double>();
    long long window = positive_int(P, "window");
    SeparatedSet X = SeparatedSet::uniform(spacing, -window / 2, window / 2 - 1);
    std::string csv = "r,min_count_rate,separation\n";
    for (const json& rj : P["radii"]) {
        double r = rj.get<double>();
        if (!(r > 0.0)) throw usage_error("parameters.radii: entries must be positive");
        DensityReport d = density_report(X, r);
        csv += g12(r) + ',' + g12(d.min_count_rate) + ',' + g12(d.separation) + '\n';
    }
    man.stage_seconds.emplace_back("compute", clock.lap());
    write_text_file((dir / "density_scan.csv").string(), csv);
    files.push_back("density_scan.csv");
    man.stage_seconds.emplace_back("write", clock.lap());
}

}

inline RunManifest run(const ExperimentConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::path dir(out_dir);
    fs::create_directories(dir);

    RunManifest man;
    man.kind = kind_name(cfg.kind);
    man.config = json{{"kind", man.kind}, {"parameters", cfg.parameters}, {"seed", cfg.seed}};
    man.version = version();
    man.timestamp = detail::iso_timestamp_utc();

    std::vector<std::string> files;
    switch (cfg.kind) {
        case ExperimentKind::decay_curve:
            detail::run_decay_curve(cfg.parameters, dir, man, files);
            break;
        case ExperimentKind::prolate_spectrum:
            detail::run_prolate_spectrum(cfg.parameters, dir, man, files);
            break;
        case ExperimentKind::svp_compare:
            detail::run_svp_compare(cfg.parameters, dir, man, files);
            break;
        case ExperimentKind::witness:
            detail::run_witness(cfg.parameters, dir, man, files);
            break;
        case ExperimentKind::unfold_demo:
            detail::run_unfold_demo(cfg.parameters, dir, man, files, cfg.seed);
            break;
        case ExperimentKind::density_scan:
            detail::run_density_scan(cfg.parameters, dir, man, files);
            break;
    }

    detail::StageClock clock;
    std::vector<std::string> plots;
    for (const std::string& f : files)
        if (f.size() > 4 && f.compare(f.size() - 4, 4, ".csv") == 0)
            plots.push_back(fs::path(render_plotdata((dir / f).string())).filename().string());
    if (!plots.empty()) {
        files.insert(files.end(), plots.begin(), plots.end());
        man.stage_seconds.emplace_back("render_plotdata", clock.lap());
    }

    for (const std::string& f : files) {
        fs::path p = dir / f;
        if (!fs::exists(p)) throw internal_error("missing output: " + f);
        std::uintmax_t bytes = fs::file_size(p);
        if (bytes == 0) throw internal_error("empty output: " + f);
        man.outputs.push_back({f, bytes});
    }
    write_text_file((dir / "manifest.json").string(), to_json(man).dump(2) + "\n");
    return man;
}

}
