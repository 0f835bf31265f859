#include "cyclecensus/commands.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace cyclecensus;

namespace {

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("cyclecensus_test_" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::size_t count_files(const fs::path& dir, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().filename().string().rfind(prefix, 0) == 0;
  return n;
}

CensusCommand census_cmd(const fs::path& out, std::uint32_t lo, std::uint32_t hi, const std::string& mode = "auto") {
  CensusCommand c;
  c.q_min = lo;
  c.q_max = hi;
  c.mode = mode;
  c.threads = 1;
  c.out = out;
  return c;
}

}  // namespace

TEST(SpectrumFile, FormatExample) {
  const auto rec = census_poly(build_field(5, 1), 2, CensusMode::full);
  const std::string s = format_spectrum_file(rec);
  EXPECT_EQ(s, "# modulus=0,1\nq,d,family,k,count\n5,2,polynomial,1,100\n5,2,polynomial,2,40\n5,2,polynomial,3,20\n");
  EXPECT_EQ(spectrum_file_name(5, 2, Family::polynomial), "census_polynomial_d2_q5.csv");
}

TEST(SpectrumFile, RoundTripProperty) {
  std::mt19937_64 rng(11);
  for (std::uint32_t q : prime_powers_in_range(2, 64)) {
    const FieldSpec F = FieldSpec::of_order(q);
    CensusRecord rec;
    rec.q = q;
    rec.d = 1 + static_cast<unsigned>(rng() % 4);
    rec.family = rng() % 2 ? Family::polynomial : Family::rational;
    rec.total_maps = family_size(q, rec.d, rec.family);
    rec.modulus = F.modulus();
    for (int i = 0; i < 6; ++i) rec.aggregate.add(1 + rng() % (q + 1), rng() % 1000000);
    EXPECT_EQ(parse_spectrum_file(format_spectrum_file(rec)), rec) << "q=" << q;
  }
}

TEST(SpectrumFile, ParseErrors) {
  EXPECT_THROW(parse_spectrum_file(""), FormatError);
  EXPECT_THROW(parse_spectrum_file("# modulus=0,1\nbad header\n"), FormatError);
  EXPECT_THROW(parse_spectrum_file("# modulus=0,1\nq,d,family,k,count\n5,2,polynomial,x,1\n"), FormatError);
  EXPECT_THROW(parse_spectrum_file("# modulus=0,1\nq,d,family,k,count\n5,2,polynomial,2,1\n5,2,polynomial,1,1\n"), FormatError);
  EXPECT_THROW(parse_spectrum_file("# modulus=0,1\nq,d,family,k,count\n5,2,polynomial,1,1\n7,2,polynomial,2,1\n"), FormatError);
  EXPECT_THROW(parse_spectrum_file("# modulus=1,1,1\nq,d,family,k,count\n5,2,polynomial,1,1\n"), FormatError);
}

TEST(Manifest, RegisterAndVerify) {
  TempDir tmp;
  Manifest m;
  write_file_atomic(tmp.path() / "a.csv", "hello\n");
  m.register_file("a.csv", "hello\n");
  m.set("x", "1");
  m.save(tmp.path());
  const Manifest back = Manifest::load(tmp.path());
  EXPECT_EQ(back.get("x"), "1");
  EXPECT_EQ(back.files(), std::vector<std::string>{"a.csv"});
  EXPECT_TRUE(back.verify(tmp.path()).empty());
  write_file_atomic(tmp.path() / "a.csv", "tampered\n");
  EXPECT_EQ(back.verify(tmp.path()).size(), 1U);
  fs::remove(tmp.path() / "a.csv");
  EXPECT_EQ(back.verify(tmp.path()).front(), "a.csv: missing");
  EXPECT_EQ(crc32_hex("123456789"), "cbf43926");
}

TEST(Svg, DeterministicRender) {
  SvgPlot p;
  p.title = "t <1>";
  p.series.push_back({"s", SvgSeries::Style::markers, "#000000", {{1, 2}, {3, 4}}});
  p.series.push_back({"l", SvgSeries::Style::line, "#ff0000", {{1, 1}, {2, 5}, {3, 2}}});
  const std::string a = p.render();
  EXPECT_EQ(a, p.render());
  EXPECT_NE(a.find("<svg"), std::string::npos);
  EXPECT_NE(a.find("t &lt;1&gt;"), std::string::npos);
  EXPECT_NE(a.find("<polyline"), std::string::npos);
}

TEST(CensusCommand, SweepWritesOneFilePerPrimePower) {
  TempDir tmp;
  std::ostringstream log;
  EXPECT_EQ(run_census(census_cmd(tmp.path(), 2, 27), log), 0);
  EXPECT_EQ(count_files(tmp.path(), "census_polynomial_d2_q"), 15U);
  const Manifest m = Manifest::load(tmp.path());
  EXPECT_TRUE(m.verify(tmp.path()).empty());
  EXPECT_EQ(m.get("file.census_polynomial_d2_q8.csv.mode"), "full");
  EXPECT_EQ(m.get("file.census_polynomial_d2_q9.csv.mode"), "reduced");
  EXPECT_TRUE(m.get("file.census_polynomial_d2_q8.csv.note"));
  EXPECT_EQ(m.get("field.q8.modulus"), "1,1,0,1");
  EXPECT_EQ(load_census_dir(tmp.path(), 2, Family::polynomial).size(), 15U);
}

TEST(CensusCommand, FullAndReducedFilesIdentical) {
  TempDir a, b;
  std::ostringstream log;
  run_census(census_cmd(a.path(), 2, 31, "full"), log);
  run_census(census_cmd(b.path(), 2, 31, "reduced"), log);
  for (auto q : prime_powers_in_range(2, 31)) {
    const std::string name = spectrum_file_name(q, 2, Family::polynomial);
    EXPECT_EQ(read_file(a.path() / name), read_file(b.path() / name)) << name;
  }
}

TEST(CensusCommand, ThreadCountDoesNotChangeFiles) {
  TempDir a, b;
  std::ostringstream log;
  auto c1 = census_cmd(a.path(), 2, 16);
  c1.degree = 3;
  auto c4 = c1;
  c4.out = b.path();
  c4.threads = 4;
  run_census(c1, log);
  run_census(c4, log);
  for (auto q : prime_powers_in_range(2, 16)) {
    const std::string name = spectrum_file_name(q, 3, Family::polynomial);
    EXPECT_EQ(read_file(a.path() / name), read_file(b.path() / name));
  }
}

TEST(CensusCommand, ResumeIsIdempotent) {
  TempDir tmp;
  std::ostringstream log;
  run_census(census_cmd(tmp.path(), 2, 13), log);
  const std::string manifest_before = read_file(tmp.path() / Manifest::kFileName);
  const auto time_before = fs::last_write_time(tmp.path() / "census_polynomial_d2_q13.csv");
  auto cmd = census_cmd(tmp.path(), 2, 13);
  cmd.resume = true;
  std::ostringstream log2;
  EXPECT_EQ(run_census(cmd, log2), 0);
  EXPECT_EQ(read_file(tmp.path() / Manifest::kFileName), manifest_before);
  EXPECT_EQ(fs::last_write_time(tmp.path() / "census_polynomial_d2_q13.csv"), time_before);
  EXPECT_EQ(log2.str().find("wrote"), std::string::npos);
}

TEST(CensusCommand, ResumeFillsMissingFiles) {
  TempDir tmp;
  std::ostringstream log;
  run_census(census_cmd(tmp.path(), 2, 7), log);
  auto cmd = census_cmd(tmp.path(), 2, 13);
  cmd.resume = true;
  run_census(cmd, log);
  EXPECT_EQ(count_files(tmp.path(), "census_polynomial_d2_q"), 9U);
  EXPECT_TRUE(Manifest::load(tmp.path()).verify(tmp.path()).empty());
}

TEST(CensusCommand, ResumeReportsCorruptFiles) {
  TempDir tmp;
  std::ostringstream log;
  run_census(census_cmd(tmp.path(), 2, 7), log);
  write_file_atomic(tmp.path() / "census_polynomial_d2_q5.csv", "garbage\n");
  auto cmd = census_cmd(tmp.path(), 2, 7);
  cmd.resume = true;
  try {
    run_census(cmd, log);
    FAIL() << "expected CommandError";
  } catch (const CommandError& e) {
    EXPECT_NE(std::string(e.what()).find("census_polynomial_d2_q5.csv"), std::string::npos);
  }
}

TEST(CensusCommand, Errors) {
  TempDir tmp;
  std::ostringstream log;
  EXPECT_THROW(run_census(census_cmd(tmp.path(), 10, 5), log), CommandError);
  EXPECT_THROW(run_census(census_cmd(tmp.path(), 24, 24), log), CommandError);
  EXPECT_THROW(run_census(census_cmd(tmp.path(), 2, 5, "fast"), log), CommandError);
  EXPECT_THROW(run_census(census_cmd("/proc/cyclecensus_nope", 2, 5), log), CommandError);
}

TEST(CensusCommand, RationalFamily) {
  TempDir tmp;
  std::ostringstream log;
  auto cmd = census_cmd(tmp.path(), 2, 5);
  cmd.family = Family::rational;
  cmd.degree = 1;
  run_census(cmd, log);
  const auto rec = load_spectrum_file(tmp.path() / "census_rational_d1_q2.csv");
  EXPECT_EQ(rec.total_maps, 6U);
  EXPECT_EQ(rec.aggregate[1], 6U);
}

TEST(ModelCommand, EnumerationTable) {
  TempDir tmp;
  std::ostringstream log;
  ModelCommand cmd;
  cmd.q = 3;
  cmd.degree = 2;
  cmd.k_max = 3;
  cmd.out = tmp.path();
  EXPECT_EQ(run_model(cmd, log), 0);
  const std::string csv = read_file(tmp.path() / "model_polynomial_d2_q3.csv");
  const auto lines = split(csv, '\n');
  ASSERT_GE(lines.size(), 4U);
  EXPECT_EQ(lines[0], "q,d,k,family,count_sets,e_x,e_y,e_xy,residual,scaled_residual,scaled_residual_float,path,e_x_check,e_y_check");
  EXPECT_NE(lines[1].find(",0/1,0/1,0,enumeration,pass,pass"), std::string::npos) << lines[1];
  EXPECT_NE(lines[2].find(",0/1,0/1,0,enumeration,pass,pass"), std::string::npos) << lines[2];
  EXPECT_EQ(lines[3].find(",0/1,0/1,0,"), std::string::npos) << lines[3];
}

TEST(ModelCommand, CensusPathAndErrors) {
  TempDir tmp;
  std::ostringstream log;
  run_census(census_cmd(tmp.path(), 5, 5), log);
  ModelCommand cmd;
  cmd.q = 5;
  cmd.degree = 2;
  cmd.k_max = 5;
  cmd.out = tmp.path();
  cmd.use_census = tmp.path();
  EXPECT_EQ(run_model(cmd, log), 0);
  EXPECT_NE(read_file(tmp.path() / "model_polynomial_d2_q5.csv").find(",both,"), std::string::npos);
  cmd.k_max = 6;
  EXPECT_THROW(run_model(cmd, log), CommandError);
  cmd.k_max = 3;
  cmd.q = 7;
  EXPECT_THROW(run_model(cmd, log), CommandError);
  ModelCommand big;
  big.q = 31;
  big.degree = 2;
  big.k_max = 12;
  big.out = tmp.path();
  big.budget = 1000;
  EXPECT_THROW(run_model(big, log), CommandError);
}

TEST(ModelCommand, RationalOracleChecks) {
  TempDir tmp;
  std::ostringstream log;
  ModelCommand cmd;
  cmd.q = 3;
  cmd.degree = 1;
  cmd.k_max = 4;
  cmd.family = Family::rational;
  cmd.out = tmp.path();
  EXPECT_EQ(run_model(cmd, log), 0);
  const std::string csv = read_file(tmp.path() / "model_rational_d1_q3.csv");
  EXPECT_EQ(csv.find("fail"), std::string::npos);
  EXPECT_EQ(csv.find("skipped"), std::string::npos);
}

TEST(ReportCommand, WritesTablesAndSummary) {
  TempDir tmp;
  std::ostringstream log;
  run_census(census_cmd(tmp.path(), 2, 31), log);
  ReportCommand rep;
  rep.in = tmp.path();
  rep.degree = 2;
  rep.residual_q_max = 11;
  std::ostringstream out;
  EXPECT_EQ(run_report(rep, out), 0);
  for (const char* f : {"cycle_support_polynomial_d2.csv", "ck_table_polynomial_d2.csv", "conjecture_polynomial_d2.csv",
                        "mean_components_polynomial_d2.csv", "heuristic_residual_polynomial_d2.csv"})
    EXPECT_TRUE(fs::exists(tmp.path() / f)) << f;
  const std::string text = out.str();
  EXPECT_NE(text.find("first q with a 1-cycle: 2"), std::string::npos) << text;
  EXPECT_NE(text.find("C_6 ="), std::string::npos);
  EXPECT_NE(text.find("[provisional]"), std::string::npos);
  EXPECT_TRUE(Manifest::load(tmp.path()).verify(tmp.path()).empty());
}

TEST(ReportCommand, MissingInputsListed) {
  TempDir tmp;
  std::ostringstream log;
  run_census(census_cmd(tmp.path(), 2, 7), log);
  ReportCommand rep;
  rep.in = tmp.path();
  rep.q_min = 2;
  rep.q_max = 11;
  try {
    run_report(rep, log);
    FAIL() << "expected CommandError";
  } catch (const CommandError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("census_polynomial_d2_q8.csv"), std::string::npos);
    EXPECT_NE(msg.find("census_polynomial_d2_q11.csv"), std::string::npos);
  }
  TempDir empty;
  rep.in = empty.path();
  rep.q_min.reset();
  rep.q_max.reset();
  EXPECT_THROW(run_report(rep, log), CommandError);
}

TEST(PlotCommand, DeterministicSvg) {
  TempDir tmp, other;
  std::ostringstream log;
  run_census(census_cmd(tmp.path(), 2, 23), log);
  PlotCommand plot;
  plot.in = tmp.path();
  plot.ks = {3, 6};
  plot.ck = true;
  EXPECT_EQ(run_plot(plot, log), 0);
  const std::string first = read_file(tmp.path() / "plot_d2_k6.svg");
  plot.out = other.path();
  run_plot(plot, log);
  EXPECT_EQ(read_file(other.path() / "plot_d2_k6.svg"), first);
  EXPECT_EQ(read_file(other.path() / "plot_d2_ck.svg"), read_file(tmp.path() / "plot_d2_ck.svg"));
  plot.ks = {40};
  EXPECT_THROW(run_plot(plot, log), CommandError);
  plot.ks.clear();
  plot.ck = false;
  EXPECT_THROW(run_plot(plot, log), CommandError);
}
