#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <modfold/experiments.hpp>

using namespace modfold;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json json_of(const fs::path& p) { return json::parse(slurp(p)); }

}

TEST_CASE("config parsing rejects malformed documents with field paths") {
    REQUIRE_THROWS_WITH(parse_config(json{{"parameters", json::object()}}),
                        ContainsSubstring("config.kind"));
    REQUIRE_THROWS_WITH(parse_config(json{{"kind", "nope"}}),
                        ContainsSubstring("config.kind: unknown kind \"nope\""));
    REQUIRE_THROWS_WITH(parse_config(json{{"kind", "decay_curve"}, {"extra", 1}}),
                        ContainsSubstring("config.extra: unknown field"));
    REQUIRE_THROWS_WITH(parse_config(json{{"kind", "decay_curve"},
                                          {"parameters", json::object()}}),
                        ContainsSubstring("parameters.alpha: missing required number"));
    REQUIRE_THROWS_WITH(
        parse_config(json{{"kind", "decay_curve"},
                          {"parameters", json{{"alpha", 0.7}, {"n_max", 2.5}}}}),
        ContainsSubstring("parameters.n_max: expected integer"));
    REQUIRE_THROWS_WITH(
        parse_config(json{{"kind", "decay_curve"},
                          {"parameters", json{{"alpha", 0.7}, {"foo", 1}}}}),
        ContainsSubstring("parameters.foo: unknown field for kind decay_curve"));
    REQUIRE_THROWS_WITH(parse_config(json{{"kind", "decay_curve"},
                                          {"parameters", json{{"alpha", 0.7}}},
                                          {"seed", -1}}),
                        ContainsSubstring("config.seed"));
    REQUIRE_THROWS_AS(parse_config(json::array()), usage_error);
}

TEST_CASE("optional parameters are filled with their defaults") {
    ExperimentConfig decay =
        parse_config(json{{"kind", "decay_curve"}, {"parameters", json{{"alpha", 0.7}}}});
    REQUIRE(decay.parameters["n_max"] == 30);
    REQUIRE(decay.seed == 0);

    ExperimentConfig prolate = parse_config(
        json{{"kind", "prolate_spectrum"},
             {"parameters", json{{"alpha", 0.5}, {"n", 16}}},
             {"seed", 11}});
    REQUIRE(prolate.parameters["epsilon"] == 0.1);
    REQUIRE(prolate.seed == 11);
}

TEST_CASE("every kind advertises a stage plan") {
    for (ExperimentKind k : all_kinds()) {
        REQUIRE_FALSE(planned_stages(k).empty());
        REQUIRE(kind_from_name(kind_name(k)) == k);
    }
}

TEST_CASE("decay curve run produces the full artifact set") {
    fs::path dir = fresh_dir("modfold_exp_decay");
    ExperimentConfig cfg = parse_config(
        json{{"kind", "decay_curve"},
             {"parameters", json{{"alpha", 0.7}, {"n_max", 12}}},
             {"seed", 5}});
    RunManifest man = run(cfg, dir.string());

    REQUIRE(man.kind == "decay_curve");
    REQUIRE(man.config["seed"] == 5);
    for (const OutputRecord& out : man.outputs) {
        REQUIRE(fs::exists(dir / out.path));
        REQUIRE(fs::file_size(dir / out.path) == out.bytes);
        REQUIRE(out.bytes > 0);
    }

    detail::CsvTable t = detail::parse_csv((dir / "decay_curve.csv").string());
    REQUIRE(t.header == std::vector<std::string>{"N", "proj_norm", "residual", "bound"});
    REQUIRE(t.rows.size() == 12);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        REQUIRE(t.rows[i][0] == static_cast<double>(i + 1));
        REQUIRE(t.rows[i][2] <= t.rows[i][3] * (1.0 + 1e-12));
        if (i > 0) REQUIRE(t.rows[i][2] < t.rows[i - 1][2]);
    }

    json plot = json_of(dir / "decay_curve.plot.json");
    REQUIRE(plot["log_y"] == true);
    REQUIRE(plot["series"].size() == 2);
    REQUIRE(plot["series"][0]["name"] == "proj_norm");
    REQUIRE(plot["series"][1]["name"] == "residual");
    REQUIRE(plot["x_label"] == "N");

    json manifest = json_of(dir / "manifest.json");
    REQUIRE(manifest["kind"] == "decay_curve");
    REQUIRE(manifest["config"]["parameters"]["alpha"] == 0.7);
}

TEST_CASE("identical configs give byte-identical outputs") {
    ExperimentConfig cfg = parse_config(
        json{{"kind", "decay_curve"},
             {"parameters", json{{"alpha", 0.5}, {"n_max", 8}}},
             {"seed", 3}});
    fs::path a = fresh_dir("modfold_exp_det_a");
    fs::path b = fresh_dir("modfold_exp_det_b");
    run(cfg, a.string());
    run(cfg, b.string());
    for (const char* f : {"decay_curve.csv", "decay_curve.plot.json"})
        REQUIRE(slurp(a / f) == slurp(b / f));
}

TEST_CASE("seeded stability trials are reproducible byte for byte") {
    ExperimentConfig cfg = parse_config(
        json{{"kind", "unfold_demo"},
             {"parameters", json{{"window", 128}, {"trials", 5}}},
             {"seed", 7}});
    fs::path a = fresh_dir("modfold_exp_unfold_a");
    fs::path b = fresh_dir("modfold_exp_unfold_b");
    run(cfg, a.string());
    run(cfg, b.string());

    std::string table = slurp(a / "unfold_stability.csv");
    REQUIRE(table.rfind("# seed=7\n", 0) == 0);
    REQUIRE(table == slurp(b / "unfold_stability.csv"));
    REQUIRE(slurp(a / "unfold_demo.json") == slurp(b / "unfold_demo.json"));

    detail::CsvTable t = detail::parse_csv((a / "unfold_stability.csv").string());
    REQUIRE(t.rows.size() == 5);

    json j = json_of(a / "unfold_demo.json");
    REQUIRE(j["relative_error"].get<double>() < 1e-6);
    REQUIRE(j["report"]["peaks_used"] == 3);
}

TEST_CASE("prolate spectrum run writes the eigenvalue table and summary") {
    fs::path dir = fresh_dir("modfold_exp_prolate");
    ExperimentConfig cfg = parse_config(
        json{{"kind", "prolate_spectrum"},
             {"parameters", json{{"alpha", 0.5}, {"n", 32}}}});
    run(cfg, dir.string());

    detail::CsvTable t = detail::parse_csv((dir / "prolate_spectrum.csv").string());
    REQUIRE(t.rows.size() == 32);
    REQUIRE(t.header == std::vector<std::string>{"k", "mu_k"});

    json j = json_of(dir / "prolate_spectrum.json");
    for (const char* key : {"alpha", "N", "epsilon", "plunge_index", "log_det",
                            "fitted_decay_rate", "minkowski_bound"})
        REQUIRE(j.contains(key));
    REQUIRE(j["N"] == 32);

    json plot = json_of(dir / "prolate_spectrum.plot.json");
    REQUIRE(plot["log_y"] == false);
    REQUIRE(plot["series"].size() == 1);
}

TEST_CASE("svp comparison run stays within the bruteforce cap") {
    fs::path dir = fresh_dir("modfold_exp_svp");
    ExperimentConfig cfg = parse_config(
        json{{"kind", "svp_compare"},
             {"parameters", json{{"alpha", 0.7}, {"n_max", 6}}}});
    run(cfg, dir.string());
    detail::CsvTable t = detail::parse_csv((dir / "svp_compare.csv").string());
    REQUIRE(t.rows.size() == 6);
    for (const auto& row : t.rows) {
        REQUIRE(row[1] > 0.0);
        REQUIRE(row[2] > 0.0);
        REQUIRE(row[3] == Catch::Approx(row[2] / row[1]).epsilon(1e-9));
        double cap = std::pow(2.0, (row[0] - 1.0) / 2.0);
        REQUIRE(row[2] <= cap * row[1] * (1.0 + 1e-9));
    }

    json plot = json_of(dir / "svp_compare.plot.json");
    REQUIRE(plot["log_y"] == true);
    REQUIRE(plot["series"][0]["name"] == "bruteforce");
    REQUIRE(plot["series"][1]["name"] == "lll");

    ExperimentConfig big = parse_config(
        json{{"kind", "svp_compare"},
             {"parameters", json{{"alpha", 0.7}, {"n_max", 15}}}});
    REQUIRE_THROWS_WITH(run(big, fresh_dir("modfold_exp_svp_big").string()),
                        ContainsSubstring("capped at 14"));
}

TEST_CASE("witness run records the certificate and the verdict") {
    fs::path dir = fresh_dir("modfold_exp_witness");
    ExperimentConfig cfg = parse_config(
        json{{"kind", "witness"},
             {"parameters", json{{"alpha", 0.99}, {"max_order", 4}}}});
    run(cfg, dir.string());
    json j = json_of(dir / "witness.json");
    REQUIRE(j["met_target"] == true);
    REQUIRE(j["N"] == 2);
    REQUIRE(j["construction"] == "binomial(2)");
    REQUIRE(j["folded_norm"].get<double>() < 1e-3);
    REQUIRE(j["energy"].get<double>() > 1.0);
}

TEST_CASE("density scan echoes the lattice separation at every radius") {
    fs::path dir = fresh_dir("modfold_exp_density");
    ExperimentConfig cfg = parse_config(
        json{{"kind", "density_scan"},
             {"parameters", json{{"radii", json::array({2.0, 4.0, 8.0})}}}});
    run(cfg, dir.string());
    detail::CsvTable t = detail::parse_csv((dir / "density_scan.csv").string());
    REQUIRE(t.rows.size() == 3);
    for (const auto& row : t.rows) REQUIRE(row[2] == 0.5);
    REQUIRE(t.rows[2][0] == 8.0);
    REQUIRE(t.rows[2][1] == 2.0);

    ExperimentConfig bad = parse_config(
        json{{"kind", "density_scan"},
             {"parameters", json{{"radii", json::array({-1.0})}}}});
    REQUIRE_THROWS_WITH(run(bad, fresh_dir("modfold_exp_density_bad").string()),
                        ContainsSubstring("parameters.radii"));
}

TEST_CASE("plot rendering rejects defective CSV files") {
    fs::path dir = fresh_dir("modfold_exp_plotdata");
    REQUIRE_THROWS_WITH(render_plotdata((dir / "missing.csv").string()),
                        ContainsSubstring("cannot open"));

    fs::path empty = dir / "empty.csv";
    write_text_file(empty.string(), "");
    REQUIRE_THROWS_WITH(render_plotdata(empty.string()), ContainsSubstring("empty CSV"));

    fs::path headers = dir / "headers.csv";
    write_text_file(headers.string(), "a,b\n");
    REQUIRE_THROWS_WITH(render_plotdata(headers.string()),
                        ContainsSubstring("no data rows"));

    fs::path ragged = dir / "ragged.csv";
    write_text_file(ragged.string(), "a,b\n1,2,3\n");
    REQUIRE_THROWS_WITH(render_plotdata(ragged.string()),
                        ContainsSubstring("malformed row at line 2"));

    fs::path text = dir / "text.csv";
    write_text_file(text.string(), "a,b\n1,zzz\n");
    REQUIRE_THROWS_WITH(render_plotdata(text.string()),
                        ContainsSubstring("non-numeric cell at line 2"));

    fs::path fine = dir / "fine.csv";
    write_text_file(fine.string(), "# comment\nx,y\n1,2\n3,4\n");
    std::string out = render_plotdata(fine.string());
    json plot = json_of(out);
    REQUIRE(plot["x"] == json::array({1.0, 3.0}));
    REQUIRE(plot["series"][0]["y"] == json::array({2.0, 4.0}));
    REQUIRE(plot["log_y"] == false);
}
