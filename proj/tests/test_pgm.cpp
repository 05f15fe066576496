#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "wavemotion/pgm.hpp"

using namespace wavemotion;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("wavemotion_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_pgm_bytes(const std::string& path, int w, int h,
                     const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << w << " " << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("intensity normalization endpoints") {
    TempDir dir;
    write_pgm_bytes(dir.file("f.pgm"), 2, 1, {0, 255});
    const Frame f = load_frame(dir.file("f.pgm"));
    CHECK(f.data[0] == 0.0);
    CHECK(f.data[1] == 1.0);
}

TEST_CASE("rgb converts through the fixed luma weights") {
    TempDir dir;
    {
        std::ofstream out(dir.file("c.ppm"), std::ios::binary);
        out << "P6\n1 1\n255\n";
        const std::uint8_t px[3] = {255, 0, 0};
        out.write(reinterpret_cast<const char*>(px), 3);
    }
    const Frame f = load_frame(dir.file("c.ppm"));
    CHECK(f.data[0] == Catch::Approx(0.299).margin(1e-12));
}

TEST_CASE("load_sequence sorts by embedded index and checks dimensions") {
    TempDir dir;
    write_pgm_bytes(dir.file("f010.pgm"), 4, 4, std::vector<std::uint8_t>(16, 10));
    write_pgm_bytes(dir.file("f002.pgm"), 4, 4, std::vector<std::uint8_t>(16, 2));
    write_pgm_bytes(dir.file("unrelated.txt"), 4, 4, std::vector<std::uint8_t>(16, 9));
    const FrameSequence seq = load_sequence(dir.path.string(), "f%03d.pgm");
    REQUIRE(seq.size() == 2);
    CHECK(seq.indices == std::vector<int>{2, 10});
    CHECK(seq.frames[0].data[0] == Catch::Approx(2.0 / 255.0));
    CHECK(seq.frames[1].data[0] == Catch::Approx(10.0 / 255.0));

    write_pgm_bytes(dir.file("f003.pgm"), 5, 4, std::vector<std::uint8_t>(20, 1));
    CHECK_THROWS_WITH(load_sequence(dir.path.string(), "f%03d.pgm"),
                      Catch::Matchers::ContainsSubstring("f003.pgm"));
}

TEST_CASE("load_sequence error paths") {
    CHECK_THROWS_AS(load_sequence("/no/such/dir", "f%03d.pgm"), IoError);
    TempDir dir;
    CHECK_THROWS_AS(load_sequence(dir.path.string(), "f%03d.pgm"), IoError);
    {
        std::ofstream out(dir.file("f000.pgm"), std::ios::binary);
        out << "not a pgm";
    }
    CHECK_THROWS_WITH(load_sequence(dir.path.string(), "f%03d.pgm"),
                      Catch::Matchers::ContainsSubstring("f000.pgm"));
}

TEST_CASE("mask coding and round trip") {
    TempDir dir;
    write_pgm_bytes(dir.file("gt.pgm"), 3, 1, {255, 0, 85});
    const GroundTruthMask m = load_mask(dir.file("gt.pgm"));
    CHECK(m.labels[0] == TruthLabel::Motion);
    CHECK(m.labels[1] == TruthLabel::Static);
    CHECK(m.labels[2] == TruthLabel::Ignore);

    save_mask(dir.file("copy.pgm"), m);
    const GroundTruthMask again = load_mask(dir.file("copy.pgm"));
    CHECK(again.labels == m.labels);
}

TEST_CASE("all-motion and all-static masks") {
    TempDir dir;
    write_pgm_bytes(dir.file("on.pgm"), 2, 2, std::vector<std::uint8_t>(4, 255));
    write_pgm_bytes(dir.file("off.pgm"), 2, 2, std::vector<std::uint8_t>(4, 0));
    for (auto label : load_mask(dir.file("on.pgm")).labels) CHECK(label == TruthLabel::Motion);
    for (auto label : load_mask(dir.file("off.pgm")).labels) CHECK(label == TruthLabel::Static);
}

TEST_CASE("segmentation masks write 255/0 and read back") {
    TempDir dir;
    SegmentationMask m;
    m.height = 2;
    m.width = 2;
    m.motion = {1, 0, 0, 1};
    save_segmentation(dir.file("mask.pgm"), m);
    const PnmImage raw = read_pnm(dir.file("mask.pgm"));
    CHECK(raw.bytes == std::vector<std::uint8_t>{255, 0, 0, 255});
    const SegmentationMask back = load_segmentation(dir.file("mask.pgm"));
    CHECK(back.motion == m.motion);
}

TEST_CASE("file patterns format and parse") {
    const FilePattern pat("in%06d.pgm");
    CHECK(pat.format(7) == "in000007.pgm");
    CHECK(pat.parse("in000123.pgm") == 123);
    CHECK_FALSE(pat.parse("in.pgm").has_value());
    CHECK_FALSE(pat.parse("inXXX.pgm").has_value());
    CHECK(FilePattern("f%d.pgm").parse("f42.pgm") == 42);
    CHECK_THROWS_AS(FilePattern("noField.pgm"), ConfigError);
    CHECK_THROWS_AS(FilePattern("a%db%d.pgm"), ConfigError);
    CHECK_THROWS_AS(FilePattern("a%s.pgm"), ConfigError);
}

TEST_CASE("pgm reader rejects malformed headers") {
    TempDir dir;
    {
        std::ofstream out(dir.file("trunc.pgm"), std::ios::binary);
        out << "P5\n4 4\n255\nxy";  // 2 of 16 bytes
    }
    CHECK_THROWS_AS(read_pnm(dir.file("trunc.pgm")), IoError);
    {
        std::ofstream out(dir.file("deep.pgm"), std::ios::binary);
        out << "P5\n1 1\n65535\n  ";
    }
    CHECK_THROWS_AS(read_pnm(dir.file("deep.pgm")), IoError);
    {
        std::ofstream out(dir.file("comment.pgm"), std::ios::binary);
        out << "P5\n# a comment\n1 1\n255\n";
        out.put('\x40');
    }
    CHECK(read_pnm(dir.file("comment.pgm")).bytes[0] == 0x40);
}
