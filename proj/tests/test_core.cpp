#include <fstream>
#include <vector>

#include "quadinterp/image_io.hpp"
#include "quadinterp/raster.hpp"
#include "support.hpp"

using namespace quadinterp;
using qtest::TempDir;

namespace {

// Hand-assembled PNGs (zlib-compressed scanlines, filter byte 0).
const std::vector<unsigned char> kWhiteRgb = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00,
    0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x02, 0x00, 0x00, 0x00, 0x90, 0x77, 0x53, 0xde, 0x00,
    0x00, 0x00, 0x0c, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0xf8, 0xff, 0xff, 0x3f, 0x00, 0x05, 0xfe,
    0x02, 0xfe, 0x0d, 0xef, 0x46, 0xb8, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60,
    0x82};
// 2x2 gray: 128 0 / 255 7.
const std::vector<unsigned char> kGray2x2 = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00,
    0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x00, 0x00, 0x00, 0x00, 0x57, 0xdd, 0x52, 0xf8, 0x00,
    0x00, 0x00, 0x0e, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x68, 0x60, 0x60, 0xf8, 0xcf, 0x0e, 0x00,
    0x04, 0x8b, 0x01, 0x87, 0xc4, 0x82, 0x1d, 0xcc, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae,
    0x42, 0x60, 0x82};
const std::vector<unsigned char> k16BitGray = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00,
    0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00, 0x00, 0x00, 0x00, 0x6a, 0xee, 0x47, 0x16, 0x00,
    0x00, 0x00, 0x0b, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x10, 0x32, 0x01, 0x00, 0x00, 0x5b, 0x00,
    0x47, 0x96, 0xfb, 0x1b, 0x65, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
const std::vector<unsigned char> kGrayAlpha = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00,
    0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x04, 0x00, 0x00, 0x00, 0xb5, 0x1c, 0x0c, 0x02, 0x00,
    0x00, 0x00, 0x0b, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x68, 0xf8, 0x0f, 0x00, 0x02, 0x02, 0x01,
    0x80, 0x6e, 0x56, 0x8b, 0x13, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

void write_bytes(const std::filesystem::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<char> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Brute-force gradient magnitude with explicit border cases.
double edge_oracle(const Frame& f, int x, int y, int c) {
  const int w = f.width(), h = f.height();
  double gx = 0.0, gy = 0.0;
  if (w > 1) {
    if (x == 0) gx = f.at(1, y, c) - f.at(0, y, c);
    else if (x == w - 1) gx = f.at(w - 1, y, c) - f.at(w - 2, y, c);
    else gx = (f.at(x + 1, y, c) - f.at(x - 1, y, c)) / 2.0;
  }
  if (h > 1) {
    if (y == 0) gy = f.at(x, 1, c) - f.at(x, 0, c);
    else if (y == h - 1) gy = f.at(x, h - 1, c) - f.at(x, h - 2, c);
    else gy = (f.at(x, y + 1, c) - f.at(x, y - 1, c)) / 2.0;
  }
  return std::sqrt(gx * gx + gy * gy);
}

}  // namespace

TEST(Frame, RejectsBadShapesAndValues) {
  EXPECT_THROW(Frame(0, 4, 1), DimensionError);
  EXPECT_THROW(Frame(4, 4, 2), DimensionError);
  EXPECT_THROW(Frame(2, 1, 1, std::vector<double>{0.0}), DimensionError);
  EXPECT_THROW(Frame(2, 1, 1, std::vector<double>{0.0, std::nan("")}), ConfigError);
  EXPECT_NO_THROW(Frame(2, 1, 1, std::vector<double>{-0.5, 1.5}));
}

TEST(TimeFraction, ClosedUnitInterval) {
  EXPECT_NO_THROW(TimeFraction(0.0));
  EXPECT_NO_THROW(TimeFraction(1.0));
  EXPECT_THROW(TimeFraction(-1e-12), ConfigError);
  EXPECT_THROW(TimeFraction(1.0 + 1e-12), ConfigError);
  EXPECT_DOUBLE_EQ(TimeFraction(0.25).complement().value(), 0.75);
}

TEST(ImageIo, LoadsFullScaleRgbAsOne) {
  TempDir dir;
  write_bytes(dir / "white.png", kWhiteRgb);
  const Frame f = load_frame(dir / "white.png");
  ASSERT_EQ(f.channels(), 3);
  EXPECT_EQ(f.data()[0], 1.0);
  EXPECT_EQ(f.data()[1], 1.0);
  EXPECT_EQ(f.data()[2], 1.0);
}

TEST(ImageIo, LoadsGrayDividingBy255) {
  TempDir dir;
  write_bytes(dir / "gray.png", kGray2x2);
  const Frame f = load_frame(dir / "gray.png");
  ASSERT_EQ(f.width(), 2);
  ASSERT_EQ(f.height(), 2);
  ASSERT_EQ(f.channels(), 1);
  EXPECT_NEAR(f.at(0, 0, 0), 0.50196, 1e-5);
  EXPECT_EQ(f.at(0, 0, 0), 128.0 / 255.0);
  EXPECT_EQ(f.at(1, 0, 0), 0.0);
  EXPECT_EQ(f.at(0, 1, 0), 1.0);
  EXPECT_EQ(f.at(1, 1, 0), 7.0 / 255.0);
}

TEST(ImageIo, RejectsUnsupportedFormatsNamingThePath) {
  TempDir dir;
  write_bytes(dir / "deep.png", k16BitGray);
  write_bytes(dir / "alpha.png", kGrayAlpha);
  write_bytes(dir / "text.png", {'h', 'e', 'l', 'l', 'o'});
  for (const char* name : {"deep.png", "alpha.png", "text.png"}) {
    try {
      load_frame(dir / name);
      ADD_FAILURE() << name << " loaded";
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(name), std::string::npos) << e.what();
    }
  }
  EXPECT_THROW(load_frame(dir / "missing.png"), IoError);
}

TEST(ImageIo, QuantizationRoundsHalfAwayAndClamps) {
  EXPECT_EQ(quantize_to_byte(1.0), 255);
  EXPECT_EQ(quantize_to_byte(-0.2), 0);
  EXPECT_EQ(quantize_to_byte(1.7), 255);
  EXPECT_EQ(quantize_to_byte(0.5), 128);
  EXPECT_EQ(quantize_to_byte(0.0), 0);
  EXPECT_EQ(quantize_to_byte(3.0 / 255.0), 3);
}

TEST(ImageIo, SaveLoadRoundTripIsBitExact) {
  TempDir dir;
  for (int ch : {1, 3}) {
    Frame f = quantize(qtest::random_frame(17, 9, ch, 40 + ch));
    save_frame(f, dir / "a.png");
    const Frame g = load_frame(dir / "a.png");
    EXPECT_EQ(f, g);
    save_frame(g, dir / "b.png");
    EXPECT_EQ(read_bytes(dir / "a.png"), read_bytes(dir / "b.png"));
  }
  // Externally encoded file survives load then save then load.
  write_bytes(dir / "gray.png", kGray2x2);
  const Frame gray = load_frame(dir / "gray.png");
  save_frame(gray, dir / "gray2.png");
  EXPECT_EQ(load_frame(dir / "gray2.png"), gray);
}

TEST(ImageIo, SaveClampsOutOfRangeValues) {
  TempDir dir;
  save_frame(Frame(2, 1, 1, std::vector<double>{-0.2, 1.3}), dir / "c.png");
  const Frame f = load_frame(dir / "c.png");
  EXPECT_EQ(f.at(0, 0, 0), 0.0);
  EXPECT_EQ(f.at(1, 0, 0), 1.0);
}

TEST(EdgeMap, ConstantImageIsZero) {
  const Frame e = edge_map(Frame(7, 5, 3, 0.4));
  for (double v : e.data()) EXPECT_EQ(v, 0.0);
}

TEST(EdgeMap, HorizontalRampInteriorMagnitude) {
  const int w = 16, h = 6;
  Frame f(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) f.at(x, y, 0) = static_cast<double>(x) / w;
  const Frame e = edge_map(f);
  for (int y = 0; y < h; ++y)
    for (int x = 1; x < w - 1; ++x) EXPECT_NEAR(e.at(x, y, 0), 1.0 / w, 1e-15);
}

TEST(EdgeMap, SingleBrightPixelLightsItsFourNeighbours) {
  Frame f(3, 3, 1);
  f.at(1, 1, 0) = 1.0;
  const Frame e = edge_map(f);
  for (auto [x, y] : {std::pair{1, 0}, {0, 1}, {2, 1}, {1, 2}}) EXPECT_GT(e.at(x, y, 0), 0.0);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) EXPECT_DOUBLE_EQ(e.at(x, y, 0), edge_oracle(f, x, y, 0));
}

TEST(EdgeMap, MatchesFiniteDifferenceOracleOnRandomImage) {
  const Frame f = qtest::random_frame(9, 7, 3, 5);
  const Frame e = edge_map(f);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 9; ++x)
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(e.at(x, y, c), edge_oracle(f, x, y, c), 1e-15);
}

TEST(EdgeMap, TranslationEquivariantOnInterior) {
  const Frame f = qtest::random_frame(20, 12, 1, 9);
  Frame shifted(20, 12, 1);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 20; ++x) shifted.at(x, y, 0) = f.at(std::max(x - 3, 0), y, 0);
  const Frame a = edge_map(f), b = edge_map(shifted);
  for (int y = 1; y < 11; ++y)
    for (int x = 1; x < 16; ++x) EXPECT_EQ(b.at(x + 3, y, 0), a.at(x, y, 0));
}

TEST(Resample, CheckerboardAveragesToHalf) {
  const Frame f(2, 2, 1, std::vector<double>{0.0, 1.0, 1.0, 0.0});
  const Frame d = downsample2(f);
  ASSERT_EQ(d.width(), 1);
  ASSERT_EQ(d.height(), 1);
  EXPECT_EQ(d.at(0, 0, 0), 0.5);
}

TEST(Resample, ConstantsSurviveBothScalesExactly) {
  for (auto [w, h] : {std::pair{8, 6}, {7, 5}, {2, 2}, {33, 19}}) {
    for (double c : {0.1, 0.3, 1.0 / 3.0, 0.7}) {
      const Frame f(w, h, 3, c);
      const Frame d = downsample2(f);
      EXPECT_EQ(d.width(), (w + 1) / 2);
      EXPECT_EQ(d.height(), (h + 1) / 2);
      for (double v : d.data()) ASSERT_EQ(v, c);
      const Frame u = upsample2(d, w, h);
      EXPECT_EQ(u, f);
    }
  }
}

TEST(Resample, OddTrailingColumnReplicates) {
  const Frame f(3, 2, 1, std::vector<double>{0.0, 0.2, 0.9, 0.4, 0.6, 0.1});
  const Frame d = downsample2(f);
  ASSERT_EQ(d.width(), 2);
  EXPECT_DOUBLE_EQ(d.at(0, 0, 0), (0.0 + 0.2 + 0.4 + 0.6) / 4.0);
  EXPECT_DOUBLE_EQ(d.at(1, 0, 0), (0.9 + 0.9 + 0.1 + 0.1) / 4.0);
}

TEST(Resample, RejectsDegenerateSizes) {
  EXPECT_THROW(downsample2(Frame(1, 5, 1)), DimensionError);
  EXPECT_THROW(upsample2(Frame(4, 4, 1), 0, 3), DimensionError);
  EXPECT_THROW(upsample2(FlowField(4, 4), 3, 0), DimensionError);
}

TEST(Resample, FlowVectorsFollowResolution) {
  const FlowField f(10, 8, Vec2{3.0, -1.0});
  const FlowField d = downsample2(f);
  for (Vec2 v : d.vectors()) EXPECT_EQ(v, (Vec2{1.5, -0.5}));
  const FlowField odd = downsample2(FlowField(9, 7, Vec2{3.0, 0.0}));
  for (Vec2 v : odd.vectors()) EXPECT_EQ(v, (Vec2{1.5, 0.0}));
  const FlowField u = upsample2(odd, 9, 7);
  for (Vec2 v : u.vectors()) EXPECT_EQ(v, (Vec2{3.0, 0.0}));
  EXPECT_TRUE(u.all_valid());
}

TEST(Resample, FlowValidityPropagates) {
  FlowField f(4, 4, Vec2{1.0, 1.0});
  f.set_valid(0, 0, false);
  const FlowField d = downsample2(f);
  EXPECT_FALSE(d.valid(0, 0));
  EXPECT_TRUE(d.valid(1, 1));
}

TEST(Sampling, BilinearExactOnAffineAndIntegerPositions) {
  Frame f(12, 9, 1);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 12; ++x) f.at(x, y, 0) = 0.02 * x + 0.05 * y + 0.1;
  EXPECT_EQ(sample_bilinear(f, 4.0, 3.0, 0), f.at(4, 3, 0));
  for (double x = 0.0; x <= 11.0; x += 0.37)
    for (double y = 0.0; y <= 8.0; y += 0.41) EXPECT_NEAR(sample_bilinear(f, x, y, 0), 0.02 * x + 0.05 * y + 0.1, 1e-14);
  // Edge clamp outside the grid.
  EXPECT_EQ(sample_bilinear(f, -3.0, 2.0, 0), f.at(0, 2, 0));
  EXPECT_EQ(sample_bilinear(f, 40.0, 100.0, 0), f.at(11, 8, 0));
}
