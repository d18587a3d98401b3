#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <modfold/serialize.hpp>
#include <modfold/unfolding.hpp>

using namespace modfold;

TEST_CASE("separated sets survive the JSON round trip") {
    SeparatedSet uniform = SeparatedSet::uniform(0.5, -4, 3);
    json ju = to_json(uniform);
    SeparatedSet back = separated_set_from_json(ju);
    REQUIRE(back.is_uniform());
    REQUIRE(back.alpha() == uniform.alpha());
    REQUIRE(back.k_first() == uniform.k_first());
    REQUIRE(back.k_last() == uniform.k_last());

    SeparatedSet scattered = SeparatedSet::from_points({-1.0, -0.2, 0.7, 2.0});
    SeparatedSet back2 = separated_set_from_json(to_json(scattered));
    REQUIRE_FALSE(back2.is_uniform());
    REQUIRE(back2.points() == scattered.points());

    REQUIRE_THROWS_AS(separated_set_from_json(json{{"alpha", 0.5}}), usage_error);
    REQUIRE_THROWS_AS(separated_set_from_json(json::object()), usage_error);
}

TEST_CASE("signals survive the JSON round trip") {
    BandlimitedSignal f;
    f.omega = 2.0;
    f.atoms.push_back({0.5, Scalar(1.0, -0.25)});
    f.atoms.push_back({-1.5, Scalar(0.0, 3.0)});
    BandlimitedSignal back = signal_from_json(to_json(f));
    REQUIRE(back.omega == f.omega);
    REQUIRE(back.atoms.size() == 2);
    REQUIRE(back.atoms[0].center == 0.5);
    REQUIRE(back.atoms[0].coeff == Scalar(1.0, -0.25));
    REQUIRE(back.atoms[1].coeff == Scalar(0.0, 3.0));

    REQUIRE_THROWS_AS(signal_from_json(json{{"omega", 1.0}}), usage_error);
    REQUIRE_THROWS_AS(
        signal_from_json(json{{"omega", 1.0}, {"atoms", json::array({json::array({1.0})})}}),
        usage_error);
}

TEST_CASE("folded samples survive the JSON round trip") {
    FoldedSamples s;
    s.lambda = 0.5;
    s.values = {Scalar(0.1, 0.0), Scalar(-0.4, 0.2)};
    FoldedSamples back = folded_samples_from_json(to_json(s));
    REQUIRE(back.lambda == 0.5);
    REQUIRE(back.values == s.values);
    REQUIRE_THROWS_AS(folded_samples_from_json(json{{"lambda", 0.5}}), usage_error);
}

TEST_CASE("certificate records carry the full identity") {
    IntegerCertificate cert = binomial_certificate(2, 0.7);
    json j = certificate_json(cert, 2.042, 0.206);
    REQUIRE(j["alpha"] == 0.7);
    REQUIRE(j["construction"] == "binomial(2)");
    REQUIRE(j["N"] == 2);
    REQUIRE(j["coeffs"] == json::array({1, -2, 1}));
    REQUIRE(j["residual"].get<double>() == Catch::Approx(cert.residual));
    REQUIRE(j["energy"] == 2.042);
    REQUIRE(j["folded_norm"] == 0.206);
    REQUIRE_FALSE(j.contains("coeffs_imag"));
}

TEST_CASE("recovery reports serialize every diagnostic field") {
    UnfoldConfig cfg;
    cfg.lambda = 0.5;
    cfg.energy_bound = 1.0;
    cfg.omega = 1.0;
    cfg.X = SeparatedSet::uniform(0.5, -32, 31);
    BandlimitedSignal f;
    f.omega = 1.0;
    f.atoms.push_back({0.0, Scalar(0.3, 0.0)});
    RecoveryReport rep = unfold(fold_samples(f, cfg.X, cfg.lambda), cfg);
    json j = to_json(rep);
    for (const char* key : {"recovered", "coeffs", "atom_grid", "fold_counts", "peak_set",
                            "residual", "lipschitz_estimate", "reduced_frame_lower",
                            "peaks_used", "max_peaks", "warnings"})
        REQUIRE(j.contains(key));
    REQUIRE(j["peaks_used"] == 0);
}

TEST_CASE("stability tables render with a seed header") {
    StabilityTable table;
    table.seed = 99;
    table.rows.push_back({0, 0.125, 0.0625, 0.5, 0.7367, 2});
    std::string csv = stability_table_csv(table);
    REQUIRE(csv.rfind("# seed=99\n", 0) == 0);
    REQUIRE(csv.find("trial,toral_dist,l2_error,ratio,lipschitz_estimate,peaks_used\n") !=
            std::string::npos);
    REQUIRE(csv.find("0,0.125,0.0625,0.5,0.7367,2\n") != std::string::npos);
}

TEST_CASE("twelve significant digits in the compact float format") {
    CHECK(g12(0.1) == "0.1");
    CHECK(g12(2.0) == "2");
    CHECK(g12(1.0 / 3.0) == "0.333333333333");
    CHECK(g12(1.5e-12) == "1.5e-12");
    CHECK(g12(-0.0001220703125) == "-0.0001220703125");
}

TEST_CASE("text files write atomically enough to read back") {
    std::filesystem::path p = std::filesystem::temp_directory_path() / "modfold_ser_test.txt";
    write_text_file(p.string(), "alpha,beta\n1,2\n");
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "alpha,beta");
    std::filesystem::remove(p);
    REQUIRE_THROWS_AS(write_text_file("/nonexistent-dir/x/y.txt", "data"), usage_error);
}
