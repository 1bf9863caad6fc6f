// Full-length runs; ctest label "slow".
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "drlab/analysis.hpp"
#include "drlab/cli.hpp"
#include "drlab/presets.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args, std::string* out = nullptr) {
    std::ostringstream o, e;
    const int code = drlab::run_cli(args, o, e);
    if (out) *out = o.str();
    return code;
}

} // namespace

TEST_SUITE("slow") {
    TEST_CASE("evolve to 2048 writes every row and a manifest; fit reads it back") {
        const auto dir = fs::temp_directory_path() / ("drlab_slow_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        const auto csv = (dir / "trace.csv").string();
        REQUIRE(run({"evolve", "--preset", "example11", "--steps", "2048", "--out", csv}) == 0);
        std::ifstream in(csv);
        long lines = 0;
        for (std::string l; std::getline(in, l);) ++lines;
        CHECK(lines == 2050);
        const auto m = json::parse(std::ifstream(csv + ".manifest.json"));
        CHECK(m["outputs"].size() == 1);
        std::string out;
        CHECK(run({"fit", "--series", csv, "--window", "256:2048", "--expect-slope", "-2.3:-1.8"}, &out) == 0);
        CHECK(json::parse(out)["points"].size() == 7);
        fs::remove_all(dir);
    }

    TEST_CASE("fit on a preset evolves by itself") {
        std::string out;
        CHECK(run({"fit", "--preset", "example11", "--window", "256:2048", "--expect-slope", "-2.3:-1.8"}, &out) == 0);
        const double slope = json::parse(out)["slope"];
        CHECK(slope >= -2.3);
        CHECK(slope <= -1.8);
    }

    TEST_CASE("scaling bands do not depend on the truncation tolerance") {
        for (double eps : {1e-14, 2e-14}) {
            CAPTURE(eps);
            auto spec = drlab::preset("example11", drlab::Mode::Float);
            spec.eps = eps;
            const auto rep = drlab::scaling_report(drlab::evolve<double>(spec, 2048), drlab::Phase::Critical);
            for (const auto& b : rep.bands) {
                CAPTURE(b.column);
                CHECK(b.pass);
            }
            CHECK(rep.tail_pass);
        }
    }
}
