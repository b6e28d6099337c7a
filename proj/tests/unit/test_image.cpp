#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "mcm/image.hpp"
#include "mcm/rng.hpp"

using namespace mcm;

TEST_SUITE("image") {

TEST_CASE("make_image fills and indexes channel-major") {
    Image img = make_image(3, 4, 5, 0.25);
    CHECK(img.channels == 3);
    CHECK(img.height == 4);
    CHECK(img.width == 5);
    CHECK(img.data.size() == 60);
    for (double v : img.data) CHECK(v == 0.25);

    img.at(1, 2, 3) = 0.75;
    // channel 1, row 2, col 3 -> ((1*4)+2)*5 + 3 = 33
    CHECK(img.data[33] == 0.75);
    CHECK(img.at(1, 2, 3) == 0.75);
}

TEST_CASE("valid rejects out-of-range values and bad shapes") {
    Image img = make_image(1, 2, 2, 0.5);
    CHECK(img.valid());
    img.data[1] = 1.5;
    CHECK_FALSE(img.valid());
    img.data[1] = -0.1;
    CHECK_FALSE(img.valid());
    img.data[1] = 1.0;
    CHECK(img.valid());
    img.data.pop_back();
    CHECK_FALSE(img.valid());
}

TEST_CASE("ppm round trip quantizes to 1/255") {
    Rng rng(42);
    Image img = make_image(3, 6, 5);
    for (double& v : img.data) v = rng.unit();

    const std::string path =
        (std::filesystem::temp_directory_path() / "mcm_test_roundtrip.ppm").string();
    write_ppm(img, path);
    const Image back = read_ppm(path);
    std::remove(path.c_str());

    REQUIRE(back.channels == 3);
    REQUIRE(back.height == 6);
    REQUIRE(back.width == 5);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(back.data[i] - img.data[i]) <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("write_ppm requires three channels") {
    const Image img = make_image(1, 2, 2, 0.5);
    const std::string path =
        (std::filesystem::temp_directory_path() / "mcm_test_gray.ppm").string();
    CHECK_THROWS(write_ppm(img, path));
}

TEST_CASE("read_ppm rejects non-p6 input") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "mcm_test_bad.ppm").string();
    {
        FILE* f = std::fopen(path.c_str(), "wb");
        REQUIRE(f != nullptr);
        std::fputs("P3\n1 1\n255\n0 0 0\n", f);
        std::fclose(f);
    }
    CHECK_THROWS(read_ppm(path));
    std::remove(path.c_str());
}

}  // TEST_SUITE
