#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "pdct/error.hpp"
#include "pdct/field_io.hpp"
#include "pdct/pgm.hpp"
#include "pdct/run_config.hpp"
#include "support.hpp"

using namespace pdct;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("pdct_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string error_of(std::string_view text)
{
    try {
        RunConfig::parse(text, ".");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("field files round-trip")
{
    const fs::path dir = scratch_dir("fields");
    std::mt19937_64 rng(1);
    const Image u(5, 3, testing::random_vector(rng, 15));
    const Sinogram g(4, 6, testing::random_vector(rng, 24));
    const VectorField v(Image(3, 3, testing::random_vector(rng, 9)), Image(3, 3, testing::random_vector(rng, 9)));
    write_field(dir / "u.img", u);
    write_field(dir / "g.img", g);
    write_field(dir / "v.img", v);
    CHECK(std::get<Image>(read_field(dir / "u.img")) == u);
    CHECK(read_sinogram(dir / "g.img") == g);
    CHECK(std::get<VectorField>(read_field(dir / "v.img")) == v);
    CHECK(fs::file_size(dir / "u.img") == 16 + 15 * 8);
    CHECK_THROWS_AS(read_image(dir / "g.img"), IoError);
}

TEST_CASE("field header layout")
{
    const fs::path dir = scratch_dir("header");
    write_field(dir / "g.img", Sinogram(2, 3, 1.0));
    std::ifstream in(dir / "g.img", std::ios::binary);
    unsigned char h[16];
    in.read(reinterpret_cast<char*>(h), 16);
    CHECK(std::string(reinterpret_cast<char*>(h), 4) == "PDCT");
    CHECK(h[4] == 2);
    CHECK(h[8] == 2);
    CHECK(h[12] == 3);
}

TEST_CASE("corrupt field files")
{
    const fs::path dir = scratch_dir("corrupt");
    {
        std::ofstream(dir / "bad.img", std::ios::binary) << "NOPE0000000000000000";
    }
    CHECK_THROWS_AS(read_field(dir / "bad.img"), IoError);
    write_field(dir / "ok.img", Image(4, 4, 1.0));
    fs::resize_file(dir / "ok.img", 40);
    CHECK_THROWS_AS(read_field(dir / "ok.img"), IoError);
    CHECK_THROWS_AS(read_field(dir / "missing.img"), IoError);
}

TEST_CASE("config parsing")
{
    const RunConfig c = RunConfig::parse("# desk\n"
                                         "image_size = 64\n"
                                         "  instance = precond_kltv   # inline comment\n"
                                         "lambda = 2e-5\n"
                                         "noise = none\n"
                                         "image_side = auto\n"
                                         "output_dir = runs/a\n",
                                         "/data/cfg");
    CHECK(c.image_size == 64);
    CHECK(c.phantom.m == 64);
    CHECK(c.solver.instance == Instance::PrecondKLTV);
    CHECK(c.solver.lambda == 2e-5);
    CHECK_FALSE(c.noise);
    CHECK(c.output_path() == fs::path("/data/cfg/runs/a"));
    CHECK(c.sinogram_path() == fs::path("/data/cfg/runs/a/sinogram_noisy.img"));
}

TEST_CASE("config echo parses back to the same configuration")
{
    const RunConfig c = RunConfig::parse("image_size = 32\nlambda = 3.3e-5\nbin_size = 0.037\n", "/x");
    const RunConfig d = RunConfig::parse(c.echo(), "/x");
    CHECK(d.echo() == c.echo());
    CHECK(d.bin_size == 0.037);
}

TEST_CASE("config errors name the line")
{
    CHECK(error_of("image_size = 64\nimgae_size = 32\n").find("line 2: unknown key 'imgae_size'") !=
          std::string::npos);
    CHECK(error_of("lambda = 1\nlambda = 2\n").find("line 2: duplicate key") != std::string::npos);
    CHECK(error_of("\n\nlambda 1\n").find("line 3") != std::string::npos);
    CHECK(error_of("lambda = abc\n").find("expected a number") != std::string::npos);
    CHECK(error_of("n_views = -3\n").find("line 1") != std::string::npos);
    CHECK(error_of("instance = lsq\n").find("line 1") != std::string::npos);
    CHECK(error_of("window_lo = 2\nwindow_hi = 1\n") != "");
    CHECK_THROWS_AS(RunConfig::load("/nonexistent/pdct.cfg"), Error);
}

TEST_CASE("window mapping")
{
    CHECK(window_level(0.95, 0.95, 1.15) == 0);
    CHECK(window_level(1.15, 0.95, 1.15) == 255);
    CHECK(window_level(1.05, 0.95, 1.15) == 128);
    CHECK(window_level(-5.0, 0.95, 1.15) == 0);
    CHECK(window_level(9.0, 0.95, 1.15) == 255);
    CHECK_THROWS_AS(window_level(1.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("PGM encoding puts the largest row index on top")
{
    Image u(2, 2, std::vector<double>{0.0, 1.0, 2.0, 3.0});
    const auto bytes = encode_pgm(u, 0.0, 3.0);
    const std::string header = "P5\n2 2\n255\n";
    REQUIRE(bytes.size() == header.size() + 4);
    CHECK(std::string(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(header.size())) == header);
    CHECK(bytes[header.size() + 0] == 170);
    CHECK(bytes[header.size() + 1] == 255);
    CHECK(bytes[header.size() + 2] == 0);
    CHECK(bytes[header.size() + 3] == 85);
}

TEST_CASE("ROI crops")
{
    Image u(4, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < 4; ++i) {
            u(i, j) = 10.0 * j + i;
        }
    }
    const Image c = crop(u, Roi{1, 2, 2, 2});
    CHECK(c == Image(2, 2, std::vector<double>{21, 22, 31, 32}));
    CHECK_THROWS_AS(crop(u, Roi{3, 0, 2, 1}), ShapeError);
    CHECK_THROWS_AS(crop(u, Roi{0, 0, 0, 1}), ShapeError);

    const fs::path dir = scratch_dir("pgm");
    write_pgm(dir / "c.pgm", u, 0.0, 40.0, Roi{1, 2, 2, 2});
    CHECK(fs::file_size(dir / "c.pgm") == std::string("P5\n2 2\n255\n").size() + 4);
}

}
