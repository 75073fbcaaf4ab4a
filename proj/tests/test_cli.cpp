#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name)
        : dir(fs::temp_directory_path() / ("fockgen_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }

    [[nodiscard]] fs::path write(const std::string& file, const std::string& text) const {
        const fs::path p = dir / file;
        std::ofstream(p) << text;
        return p;
    }
};

int run(const std::string& args) {
    const std::string cmd = std::string(FOCKGEN_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kSmall = R"({"n_atoms": 2, "trajectories": 64, "master_seed": 3})";

}  // namespace

TEST_CASE("simulate writes its outputs") {
    Scratch s("simulate");
    const fs::path cfg = s.write("c.json", kSmall);
    const fs::path out = s.dir / "out";
    CHECK(run("simulate --config " + cfg.string() + " --out " + out.string() +
              " --dump-trajectory") == 0);
    for (const char* f : {"ensemble.csv", "summary.json", "trajectory.csv", "jumps.json"}) {
        CAPTURE(f);
        CHECK(fs::exists(out / f));
    }
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary.contains("config"));
    CHECK(summary["config"]["n_atoms"] == 2);
}

TEST_CASE("summary config reproduces the run") {
    Scratch s("roundtrip");
    const fs::path cfg = s.write("c.json", kSmall);
    REQUIRE(run("simulate --config " + cfg.string() + " --seed 11 --out " + (s.dir / "a").string()) ==
            0);
    const auto summary = nlohmann::json::parse(slurp(s.dir / "a" / "summary.json"));
    const fs::path again = s.write("again.json", summary["config"].dump());
    REQUIRE(run("simulate --config " + again.string() + " --threads 3 --out " +
                (s.dir / "b").string()) == 0);
    CHECK(slurp(s.dir / "a" / "ensemble.csv") == slurp(s.dir / "b" / "ensemble.csv"));
    CHECK(slurp(s.dir / "a" / "summary.json") == slurp(s.dir / "b" / "summary.json"));
}

TEST_CASE("config and usage errors exit 2 without output") {
    Scratch s("bad");
    const fs::path out = s.dir / "out";
    const fs::path unknown = s.write("u.json", R"({"n_atoms": 2, "colour": "red"})");
    CHECK(run("simulate --config " + unknown.string() + " --out " + out.string()) == 2);
    CHECK_FALSE(fs::exists(out));
    const fs::path malformed = s.write("m.json", "{\"n_atoms\": ");
    CHECK(run("simulate --config " + malformed.string() + " --out " + out.string()) == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(run("simulate --config " + (s.dir / "nope.json").string()) == 2);
    CHECK(run("frobnicate") == 2);
    const fs::path good = s.write("c.json", kSmall);
    CHECK(run("sweep --config " + good.string() + " --axis kappa --values 1 --out " + out.string()) ==
          2);
    CHECK(run("sweep --config " + good.string() + " --axis delta --values , --out " + out.string()) ==
          2);
    CHECK_FALSE(fs::exists(out));
    CHECK(run("dark-check --x-grid 1,abc") == 2);
}

TEST_CASE("sweep with a failing point exits 3 but writes results") {
    Scratch s("sweep");
    const fs::path cfg = s.write("c.json", R"({"n_atoms": 1, "trajectories": 32})");
    const fs::path out = s.dir / "out";
    CHECK(run("sweep --config " + cfg.string() + " --axis N --values 1,1.5 --out " + out.string()) ==
          3);
    REQUIRE(fs::exists(out / "sweep.json"));
    const auto j = nlohmann::json::parse(slurp(out / "sweep.json"));
    CHECK(j["complete"] == false);
    CHECK(run("sweep --config " + cfg.string() + " --axis delta --values -2,-4 --out " +
              out.string()) == 0);
}

TEST_CASE("dark-check exit codes") {
    CHECK(run("dark-check --n-max 4") == 0);
    CHECK(run("dark-check --n-max 1 --x-grid 0,0.5") == 0);
    // factorial-weighted series overflow at absurd drive ratios
    CHECK(run("dark-check --n-max 60 --x-grid 1e100") == 4);
}

TEST_CASE("spectrum and bounds") {
    Scratch s("spectral");
    const fs::path cfg = s.write("c.json", R"({"n_atoms": 3, "delta": -20})");
    CHECK(run("spectrum --config " + cfg.string() + " --out " + s.dir.string()) == 0);
    CHECK(fs::exists(s.dir / "spectrum.csv"));
    CHECK(fs::exists(s.dir / "spectrum.json"));
    CHECK(run("bounds --config " + cfg.string() + " --out " + s.dir.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(s.dir / "bounds.json"));
    CHECK(j["fractional_loss_bound"].get<double>() == doctest::Approx(5e-3));
    const auto& reports = j["reports"];
    REQUIRE(reports.size() == 4);
    for (std::size_t k = 1; k < reports.size(); ++k) {
        CHECK(reports[k]["eps_cavity"].get<double>() <= reports[k - 1]["eps_cavity"].get<double>());
    }

    const fs::path no_gamma = s.write("g0.json", R"({"n_atoms": 3, "gamma": 0})");
    CHECK(run("bounds --config " + no_gamma.string() + " --out " + s.dir.string()) == 0);
    const auto j0 = nlohmann::json::parse(slurp(s.dir / "bounds.json"));
    for (const auto& r : j0["reports"]) {
        CHECK(r["gamma_prime_small_delta"].get<double>() == 0.0);
        CHECK(r["gamma_prime_large_delta"].get<double>() == 0.0);
    }
}

TEST_CASE("closed single-trajectory run is reproducible") {
    Scratch s("closed");
    const fs::path cfg = s.write(
        "c.json", R"({"n_atoms": 2, "kappa": 0, "gamma": 0, "trajectories": 1, "max_steps": 500})");
    CHECK(run("simulate --config " + cfg.string() + " --dump-trajectory --out " + (s.dir / "a").string()) ==
          0);
    CHECK(run("simulate --config " + cfg.string() + " --dump-trajectory --out " + (s.dir / "b").string()) ==
          0);
    CHECK(slurp(s.dir / "a" / "trajectory.csv") == slurp(s.dir / "b" / "trajectory.csv"));
    const auto jumps = nlohmann::json::parse(slurp(s.dir / "a" / "jumps.json"));
    CHECK(jumps["jumps"].empty());
}
