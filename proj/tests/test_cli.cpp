#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "neron/cli.hpp"

using namespace neron;
using io::Json;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / ("neron_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// runs the real binary; stderr goes through a file
Result neron_cli(const std::string& args) {
  const auto err_path = scratch() / "stderr.txt";
  const std::string cmd = std::string(NERON_CLI_PATH) + " " + args + " 2>" + err_path.string();
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

std::filesystem::path write_file(const std::string& name, const std::string& text) {
  auto p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

IntMatrix matrix_of(const Json& j) { return io::matrix_from_json(j, "test"); }

}  // namespace

TEST(Cli, X0pMPrimeLevel) {
  auto r = neron_cli("x0pM --p 11 --M 1 --modulus infty0");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["group"]["string"], "Z");
  EXPECT_EQ(j["torus_image_index"], 5);
  EXPECT_EQ(j["phi_J"]["string"], "Z/5");
  EXPECT_EQ(j["closed_form"]["agrees"], true);
}

TEST(Cli, X0pMOtherModuli) {
  auto full = neron_cli("x0pM --p 11 --M 6 --modulus full");
  ASSERT_EQ(full.code, 0) << full.err;
  EXPECT_EQ(full.json()["modulus"].size(), 8u);
  auto list = neron_cli("x0pM --p 11 --M 6 --modulus 1,66,2");
  ASSERT_EQ(list.code, 0) << list.err;
  EXPECT_EQ(list.json()["group"]["free_rank"], 2);
  EXPECT_EQ(neron_cli("x0pM --p 11 --M 6 --modulus 4").code, 2);
  EXPECT_EQ(neron_cli("x0pM --p 11 --M 6 --modulus 1,1").code, 2);
  EXPECT_EQ(neron_cli("x0pM --p 12 --M 1").code, 2);
  EXPECT_EQ(neron_cli("x0pM --p 11 --M 22").code, 2);
}

TEST(Cli, X0p2Full) {
  auto r = neron_cli("x0p2 --p 13 --modulus full");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["group"]["string"], "Z^2");
  EXPECT_EQ(j["image_snf"], Json({1, 7}));
  EXPECT_EQ(j["phi_J"]["string"], "Z/7");

  auto reduced = neron_cli("x0p2 --p 13 --modulus infty0").json();
  EXPECT_EQ(reduced["group"]["string"], "Z");
  EXPECT_EQ(reduced["torus_image_index"], 7);
}

TEST(Cli, X0p2RejectsM) {
  auto r = neron_cli("x0p2 --p 13 --M 2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--M"), std::string::npos);
}

TEST(Cli, CharacterGroup) {
  auto r = neron_cli("char --p 11 --M 1");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["rank"], 2);
  EXPECT_EQ(j["basis"].size(), 2u);

  auto t2 = matrix_of(neron_cli("char --p 11 --M 1 --hecke 2").json()["hecke_transpose"]);
  ASSERT_EQ(t2.rows(), 2u);
  ASSERT_EQ(t2.cols(), 2u);
  const auto b = t2.transpose();
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(b(i, 0) + b(i, 1), 3);

  auto t11 = matrix_of(neron_cli("char --p 11 --M 1 --hecke 11").json()["hecke_transpose"]);
  EXPECT_EQ(t11, IntMatrix::identity(2));

  EXPECT_EQ(neron_cli("char --p 11 --M 2").json()["rank"], counts(11, 2).n);
  EXPECT_EQ(neron_cli("char --p 11 --M 2 --hecke 3").code, 2);
  EXPECT_EQ(neron_cli("char --p 11 --hecke 4").code, 2);
}

TEST(Cli, CuspsHecke) {
  auto j = neron_cli("cusps --N 11 --hecke 2").json();
  auto T = matrix_of(j["hecke_transpose"]);
  ASSERT_EQ(T.rows(), 2u);
  // all_cusps order: (1,1) = inf, (11,1) = 0
  const IntVector D{-1, 1};
  EXPECT_EQ(T * D, (IntVector{-3, 3}));

  auto k = neron_cli("cusps --N 49 --hecke 7").json();
  EXPECT_EQ(k["count"], 8);
  auto T7 = matrix_of(k["hecke_transpose"]);
  for (std::size_t c = 1; c <= 6; ++c) {
    IntVector v(8, 0);
    v[0] = -1;
    v[c] = 1;
    EXPECT_EQ(T7 * v, IntVector(8, 0)) << c;
  }

  auto six = neron_cli("cusps --N 6");
  ASSERT_EQ(six.code, 0);
  EXPECT_EQ(six.json()["count"], 4);
  EXPECT_EQ(neron_cli("cusps --N 11 --hecke 4").code, 2);
}

TEST(Cli, Brandt) {
  auto r = neron_cli("brandt --p 13 --ell 2");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["matrix"], Json::parse("[[3]]"));

  auto id = neron_cli("brandt --p 11 --ell 11").json();
  EXPECT_EQ(matrix_of(id["matrix"]), IntMatrix::identity(2));
  EXPECT_EQ(id["j_invariants"][0]["w"], 3);

  auto bad = neron_cli("brandt --p 11 --ell 13");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("unsupported ell"), std::string::npos);
  EXPECT_EQ(neron_cli("brandt --p 11 --ell 4").code, 2);
  EXPECT_EQ(neron_cli("brandt --p 3 --ell 2").code, 2);
}

TEST(Cli, TrivialFibre) {
  auto f = write_file("trivial_fibre.json",
                      R"({"p": 1, "components": [{"label": "Y", "d": 1, "n": 0}], "intersection": [[0]]})");
  auto m = write_file("trivial_modulus.json",
                      R"({"points": [{"label": "x", "e": 1}, {"label": "y", "e": 1}], "h": [[1], [1]]})");
  auto r = neron_cli("fibre --input " + f.string() + " --modulus-input " + m.string());
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["phi_J"]["string"], "0");
  // coker(e: Z -> Z^2), e = (1, 1)
  EXPECT_EQ(j["phi_T"]["string"], "Z");
  EXPECT_EQ(j["group"]["string"], "Z");

  auto alone = neron_cli("fibre --input " + f.string());
  ASSERT_EQ(alone.code, 0) << alone.err;
  EXPECT_EQ(alone.json()["phi_J"]["string"], "0");
}

TEST(Cli, FibreValidationReport) {
  // row sums of d_j (Y_i.Y_j) do not vanish
  auto f = write_file("bad_fibre.json",
                      R"({"p": 1, "components": [{"label": "A", "d": 1}, {"label": "B", "d": 1}],
                          "intersection": [[-1, 2], [2, -1]]})");
  auto r = neron_cli("fibre --input " + f.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("validation failed"), std::string::npos);
  EXPECT_NE(r.err.find("  - "), std::string::npos);

  auto junk = write_file("junk.json", "{not json");
  EXPECT_EQ(neron_cli("fibre --input " + junk.string()).code, 2);
  EXPECT_EQ(neron_cli("fibre --input /nonexistent/f.json").code, 2);
  auto missing = write_file("missing.json", R"({"p": 1, "components": []})");
  EXPECT_EQ(neron_cli("fibre --input " + missing.string()).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(neron_cli("").code, 2);
  EXPECT_EQ(neron_cli("frobnicate").code, 2);
  EXPECT_EQ(neron_cli("brandt --p 11").code, 2);
  EXPECT_EQ(neron_cli("x0pM --p 11 --format xml").code, 2);
  EXPECT_EQ(neron_cli("--help").code, 0);
}

TEST(Cli, Deterministic) {
  for (const std::string args : {"x0pM --p 37 --M 6", "char --p 37 --hecke 2", "cusps --N 121 --hecke 11",
                                 "brandt --p 47 --ell 3 --format table"}) {
    auto a = neron_cli(args), b = neron_cli(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, TableFormatAndOutputFile) {
  auto r = neron_cli("x0pM --p 11 --format table");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("string: Z/5"), std::string::npos);
  EXPECT_NE(r.out.find("torus_image_index: 5"), std::string::npos);

  const auto path = scratch() / "report.json";
  auto w = neron_cli("brandt --p 37 --ell 2 --output " + path.string());
  ASSERT_EQ(w.code, 0);
  EXPECT_TRUE(w.out.empty());
  auto j = Json::parse(slurp(path));
  EXPECT_EQ(j["j_invariants"].size(), 3u);
}

TEST(Cli, SweepAndSelftest) {
  auto s = neron_cli("sweep --p-max 23 --M 1,2,5");
  ASSERT_EQ(s.code, 0) << s.err;
  auto j = s.json();
  EXPECT_EQ(j["all_agree"], true);
  // p in {5,7,11,13,17,19,23}, minus (5,5)
  EXPECT_EQ(j["rows"].size(), 20u);

  auto t = neron_cli("selftest");
  ASSERT_EQ(t.code, 0) << t.out;
  EXPECT_EQ(t.json()["passed"], true);
}

TEST(CliInProcess, RunMatchesBinary) {
  std::ostringstream out, err;
  EXPECT_EQ(cli::run({"x0pM", "--p", "11"}, out, err), 0);
  EXPECT_EQ(out.str(), neron_cli("x0pM --p 11").out);
}

// ---------------------------------------------------------------------------
// JSON schemas round-trip

TEST(Io, FibreAndModulusRoundTrip) {
  const auto x = x0pM_fibre(37, 6);
  const auto fj = io::to_json(x.fibre);
  const auto f = io::fibre_from_json(Json::parse(fj.dump()));
  EXPECT_EQ(io::to_json(f), fj);
  EXPECT_EQ(f.intersection, x.fibre.intersection);

  const auto mj = io::to_json(x.modulus);
  const auto m = io::modulus_from_json(Json::parse(mj.dump()), f.size());
  EXPECT_EQ(m.h, x.modulus.h);
  EXPECT_EQ(m.e, x.modulus.e);
  EXPECT_EQ(component_group_Jm(f, m).group.group, component_group_Jm(x.fibre, x.modulus).group.group);
}

TEST(Io, GraphRoundTrip) {
  const auto g = x0pM_fibre(23, 2).graph;
  const auto gj = io::to_json(g);
  const auto back = io::graph_from_json(Json::parse(gj.dump()));
  EXPECT_EQ(io::to_json(back), gj);
  EXPECT_EQ(boundary_matrix(back), boundary_matrix(g));
  EXPECT_THROW(io::graph_from_json(Json::parse(R"({"A": [], "C": ["c"], "B": [{"id": "b", "phi": "a", "psi": "c"}]})")),
               InvalidInput);
}

TEST(Io, DivisorRoundTrip) {
  const std::uint64_t N = 49;
  std::mt19937 rng(7);
  const auto cs = all_cusps(N);
  for (int t = 0; t < 20; ++t) {
    CuspidalDivisor D(N);
    for (const auto& x : cs) D.add(x, Integer(int(rng() % 7) - 3));
    const auto j = io::to_json(D);
    EXPECT_EQ(j["N"], 49);
    EXPECT_EQ(io::divisor_from_json(Json::parse(j.dump())), D);
  }
  EXPECT_THROW(io::divisor_from_json(Json::parse(R"({"N": 49, "terms": [{"d": 5, "c": 1, "coeff": 1}]})")), InvalidInput);
}

TEST(Io, LargeIntegersAsStrings) {
  const Integer big("123456789012345678901234567890");
  const auto j = io::to_json(big);
  EXPECT_TRUE(j.is_string());
  EXPECT_EQ(io::integer_from_json(j, "x"), big);
  EXPECT_EQ(io::integer_from_json(Json(-5), "x"), -5);
  EXPECT_THROW(io::integer_from_json(Json("12x"), "x"), InvalidInput);
  EXPECT_THROW(io::integer_from_json(Json(1.5), "x"), InvalidInput);
}
