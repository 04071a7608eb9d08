#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "potts/cli.hpp"
#include "potts/oracle.hpp"
#include "support.hpp"

using namespace potts;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "potts_tm");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("potts_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  fs::path path() const { return path_; }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, Chromatic) {
  TempDir dir;
  const auto tri = dir.file("tri.graph", serialize_graph(testkit::triangle()));
  const auto r = call({"chromatic", tri});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0 2 -3 1\n");

  const auto ex = dir.file("ex.graph", serialize_graph(testkit::example_graph()));
  const auto chi = parse_poly(call({"chromatic", ex}).out);
  EXPECT_EQ(chi.eval(3), colouring_count(testkit::example_graph(), 3));
  EXPECT_EQ(call({"chromatic", ex, "--no-prune"}).out, call({"chromatic", ex}).out);
  EXPECT_EQ(call({"chromatic", ex, "--path"}).out, call({"chromatic", ex}).out);

  const auto rep = call({"chromatic", ex, "--report"});
  const auto j = nlohmann::json::parse(rep.err);
  EXPECT_EQ(j["N"], 9);
  EXPECT_EQ(j["M"], 12);
  EXPECT_EQ(j["result"], rep.out.substr(0, rep.out.size() - 1));
  EXPECT_GT(j["peak_table_size"].get<int>(), 0);
}

TEST(Cli, CrtMatchesDirect) {
  TempDir dir;
  const auto g = dir.file("p30.graph", serialize_graph(random_planar_graph(30, 11)));
  const auto direct = call({"chromatic", g});
  const auto crt = call({"chromatic", g, "--crt"});
  EXPECT_EQ(crt.code, 0);
  EXPECT_EQ(crt.out, direct.out);
}

TEST(Cli, Potts) {
  TempDir dir;
  const auto k2 = dir.file("k2.graph", "2 1\n0 1\n");
  EXPECT_EQ(call({"potts", k2, "--bivariate"}).out, "0 0 1\n0 1\n");
  const auto tri = dir.file("tri.graph", serialize_graph(testkit::triangle()));
  const double want = std::get<double>(fk_brute_force(testkit::triangle(), ScalarMode{2.0, 1.0}));
  EXPECT_EQ(call({"potts", tri, "--eval", "2", "1"}).out, cli::format_double(want) + "\n");
  EXPECT_EQ(call({"potts", tri, "--coupling", "0", "--q", "3"}).out, "27\n");
  EXPECT_EQ(call({"potts", tri, "--v", "1/2"}).out, "0 7/8 3/2 1\n");
  EXPECT_EQ(call({"potts", tri, "--v", "-1"}).out, "0 2 -3 1\n");
  EXPECT_EQ(call({"potts", tri}).code, cli::kExitInput);
  EXPECT_EQ(call({"potts", tri, "--bivariate", "--v", "2"}).code, cli::kExitInput);
  EXPECT_EQ(call({"potts", tri, "--coupling", "1"}).code, cli::kExitInput);
}

TEST(Cli, Decompose) {
  TempDir dir;
  const auto tree = dir.file("tree.graph", serialize_graph(testkit::random_tree(12, 5)));
  auto r = call({"decompose", tree});
  EXPECT_EQ(r.code, 0);
  auto td = parse_decomposition(r.out);
  EXPECT_EQ(td.width(), 1);
  EXPECT_NE(r.out.find("\nestimate "), std::string::npos);

  const auto ex = dir.file("ex.graph", serialize_graph(testkit::example_graph()));
  r = call({"decompose", ex, "--path", "--order", "lex"});
  td = parse_decomposition(r.out);
  std::vector<std::size_t> sizes;
  for (const auto& b : td.bags) sizes.push_back(b.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{3, 3, 4, 4, 5, 4, 3, 2, 1}));

  EXPECT_EQ(parse_decomposition(call({"decompose", ex, "--root", "1"}).out).root, 1);
  EXPECT_EQ(call({"decompose", ex, "--root", "99"}).code, cli::kExitInput);
  EXPECT_NE(call({"decompose", ex, "--root", "1", "--auto-root"}).code, 0);

  // Re-importing any printed decomposition reproduces the polynomial.
  const auto want = call({"chromatic", ex}).out;
  for (std::vector<std::string> flags : {std::vector<std::string>{}, {"--path"}, {"--root", "0"}}) {
    std::vector<std::string> args{"decompose", ex};
    args.insert(args.end(), flags.begin(), flags.end());
    const auto tdf = dir.file("ex.td", call(args).out);
    EXPECT_EQ(call({"chromatic", ex, "--use-decomposition", tdf}).out, want);
    EXPECT_EQ(call({"potts", ex, "--bivariate", "--use-decomposition", tdf}).out,
              call({"oracle", ex, "--fk"}).out);
  }
  const auto bad = dir.file("bad.td", "1 2\n0 1\nroot 0\n");
  EXPECT_EQ(call({"chromatic", ex, "--use-decomposition", bad}).code, cli::kExitInput);
}

TEST(Cli, Oracle) {
  TempDir dir;
  const auto tri = dir.file("tri.graph", serialize_graph(testkit::triangle()));
  EXPECT_EQ(call({"oracle", tri, "--colourings", "3"}).out, "6\n");
  const auto k2 = dir.file("k2.graph", "2 1\n0 1\n");
  EXPECT_EQ(call({"oracle", k2, "--fk"}).out, "0 0 1\n0 1\n");
  EXPECT_EQ(call({"oracle", tri, "--delcon"}).out, call({"oracle", tri, "--fk"}).out);
  EXPECT_EQ(call({"oracle", tri, "--fk", "--v", "1/2"}).out, call({"potts", tri, "--v", "1/2"}).out);
  const auto ex = dir.file("ex.graph", serialize_graph(testkit::example_graph()));
  EXPECT_EQ(call({"oracle", ex, "--fk"}).out, call({"potts", ex, "--bivariate"}).out);

  const auto grid = dir.file("grid.graph", serialize_graph(testkit::grid_graph(5, 5)));
  EXPECT_EQ(call({"oracle", grid, "--fk"}).code, cli::kExitGuard);
  EXPECT_EQ(call({"oracle", grid, "--colourings", "3"}).code, cli::kExitGuard);
}

TEST(Cli, ErrorsAndExitCodes) {
  TempDir dir;
  EXPECT_EQ(call({"chromatic", (dir.path() / "missing").string()}).code, cli::kExitInput);
  const auto loop = dir.file("loop.graph", "2 1\n0 0\n");
  const auto r = call({"chromatic", loop});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(call({"frobnicate"}).code, cli::kExitInput);
  EXPECT_EQ(call({}).code, cli::kExitInput);
  EXPECT_EQ(call({"--help"}).code, 0);

  ::setenv("POTTS_TM_PRIME_COUNT_MAX", "1", 1);
  const auto g = dir.file("p.graph", serialize_graph(random_planar_graph(20, 3)));
  EXPECT_EQ(call({"chromatic", g, "--crt"}).code, cli::kExitCompute);
  ::unsetenv("POTTS_TM_PRIME_COUNT_MAX");
}

TEST(Cli, Ensemble) {
  TempDir dir;
  const auto a = (dir.path() / "a").string();
  const auto b = (dir.path() / "b").string();
  auto r = call({"ensemble", "--n", "10", "--count", "5", "--seed", "42", "--outdir", a});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = nlohmann::json::parse(slurp(fs::path(a) / "summary.json"));
  EXPECT_EQ(summary["succeeded"], 5);
  EXPECT_EQ(summary["failed"], 0);
  EXPECT_EQ(summary["audit_violations"], 0);

  r = call({"ensemble", "--n", "10", "--count", "5", "--seed", "42", "--outdir", b, "--jobs", "3"});
  ASSERT_EQ(r.code, 0);
  for (const char* f : {"complex_density.csv", "real_hist.csv", "beraha.csv"}) {
    const auto text = slurp(fs::path(a) / f);
    EXPECT_EQ(text, slurp(fs::path(b) / f)) << f;
    EXPECT_EQ(text.find('\r'), std::string::npos);
  }

  const auto e = (dir.path() / "empty").string();
  ASSERT_EQ(call({"ensemble", "--count", "0", "--outdir", e}).code, 0);
  EXPECT_EQ(slurp(fs::path(e) / "complex_density.csv"), "x_bin_center,y_bin_center,count\n");
  EXPECT_EQ(slurp(fs::path(e) / "real_hist.csv"), "q_bin_center,density\n");
  EXPECT_EQ(slurp(fs::path(e) / "beraha.csv").substr(0, 22), "k,B_k,count_within_tol");

  EXPECT_EQ(call({"ensemble", "--n", "2", "--count", "1", "--outdir", e}).code, 0);
  const auto failed = nlohmann::json::parse(slurp(fs::path(e) / "summary.json"));
  EXPECT_EQ(failed["failed"], 1);
}
