#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <string>

#include "ocrloop/image.hpp"
#include "support/fixtures.hpp"

using namespace ocrloop;

TEST_CASE("base64: known vectors", "[image]") {
    CHECK(base64_encode("") == "");
    CHECK(base64_encode("f") == "Zg==");
    CHECK(base64_encode("fo") == "Zm8=");
    CHECK(base64_encode("foo") == "Zm9v");
    CHECK(base64_encode("foobar") == "Zm9vYmFy");
    CHECK(base64_decode("Zm9vYmFy") == "foobar");
}

TEST_CASE("base64: round trip on random binary", "[image][property]") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<std::size_t> len(0, 200);
    for (int i = 0; i < 500; ++i) {
        std::string bytes;
        const std::size_t n = len(rng);
        for (std::size_t k = 0; k < n; ++k) bytes += static_cast<char>(byte(rng));
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
    }
}

TEST_CASE("sniff_media_type: magic bytes", "[image]") {
    const std::string png(reinterpret_cast<const char*>(fixtures::kTinyPng),
                          sizeof(fixtures::kTinyPng));
    CHECK(sniff_media_type(png) == "image/png");
    CHECK(sniff_media_type("\xFF\xD8\xFF\xE0rest") == "image/jpeg");
    CHECK(sniff_media_type("GIF89a...") == "image/gif");
    CHECK(sniff_media_type("BM1234") == "image/bmp");
    // explicit length: the size field contains NUL bytes
    const std::string webp("RIFF\x10\x00\x00\x00WEBPVP8 ", 16);
    CHECK(sniff_media_type(webp) == "image/webp");
    CHECK_FALSE(sniff_media_type("plain text file").has_value());
    CHECK_FALSE(sniff_media_type("").has_value());
}

TEST_CASE("encode_image_file: round trips the bytes", "[image]") {
    const auto dir = fixtures::temp_dir("image");
    const auto path = fixtures::write_tiny_png(dir);
    const ImagePayload payload = encode_image_file(path);
    CHECK(payload.media_type == "image/png");
    REQUIRE(payload.data.size() == sizeof(fixtures::kTinyPng));
    CHECK(payload.data ==
          std::string(reinterpret_cast<const char*>(fixtures::kTinyPng), sizeof(fixtures::kTinyPng)));
    CHECK(base64_decode(base64_encode(payload.data)) == payload.data);
}

TEST_CASE("encode_image_file: missing file", "[image]") {
    CHECK_THROWS_AS(encode_image_file("/no/such/file.png"), ImageReadError);
}

TEST_CASE("encode_image_file: text masquerading as an image", "[image]") {
    const auto dir = fixtures::temp_dir("image");
    const std::string path = dir + "/fake.png";
    std::ofstream(path) << "this is not an image";
    CHECK_THROWS_AS(encode_image_file(path), UnsupportedMediaTypeError);
}

TEST_CASE("encode_image_bytes: sniffs and wraps", "[image]") {
    const std::string png(reinterpret_cast<const char*>(fixtures::kTinyPng),
                          sizeof(fixtures::kTinyPng));
    const ImagePayload payload = encode_image_bytes(png);
    CHECK(payload.media_type == "image/png");
    CHECK(payload.data == png);
    CHECK_THROWS_AS(encode_image_bytes("nope"), UnsupportedMediaTypeError);
}
