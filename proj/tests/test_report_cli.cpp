#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "meanbound/cli.hpp"
#include "meanbound/report.hpp"

using namespace meanbound;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_app(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("meanbound-test-" + std::to_string(::getpid()) + "-" +
                                         std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& body) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << body;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST(Json, BoundReportRoundTrip) {
  const BoundReport r = theorem_main_reverse(ScalarPair(0.3, 7.1), Weight(-1.0 / 3), Depth(4), Branch::ii);
  const Json j = to_json(r);
  const BoundReport back = bound_report_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.lhs, r.lhs);
  EXPECT_EQ(back.rhs, r.rhs);
  EXPECT_EQ(back.gap, r.gap);
  EXPECT_EQ(back.v, r.v);
  EXPECT_EQ(back.n, r.n);
  EXPECT_EQ(back.family, r.family);
  EXPECT_EQ(back.branch, r.branch);
  EXPECT_EQ(back.hypothesis_ok, r.hypothesis_ok);
  EXPECT_EQ(to_json(back).dump(), j.dump());
}

TEST(Json, SuiteReportRoundTrip) {
  SuiteConfig cfg;
  cfg.trials = 5;
  cfg.grid = 4;
  cfg.tau_rel = 0.0;
  cfg.dims = {1, 2};
  SuiteReport rep = run_all_suites(cfg);
  FailureRecord synthetic;
  synthetic.suite = "operator";
  synthetic.family = "theorem-t6";
  synthetic.branch = "i";
  synthetic.a = NAN;
  synthetic.cause = "synthetic";
  rep.failures.push_back(synthetic);
  const Json j = to_json(rep);
  EXPECT_EQ(j.at("tool_version"), kToolVersion);
  const SuiteReport back = suite_report_from_json(Json::parse(j.dump()));
  EXPECT_EQ(deterministic_dump(to_json(back)), deterministic_dump(j));
  EXPECT_TRUE(std::isnan(back.failures.back().a));
}

TEST(Json, OperatorReportRoundTrip) {
  const SpdMatrix a(SymMatrix::from_rows(2, {2, 0.5, 0.5, 1}));
  const SpdMatrix b(SymMatrix::from_rows(2, {1, -0.2, -0.2, 3}));
  const OperatorBoundReport r = check_operator(OperatorFamily::t66, a, b, Weight(1.7), Depth(3), Branch::i);
  const OperatorBoundReport back = operator_report_from_json(Json::parse(to_json(r).dump()));
  EXPECT_EQ(back.min_eig_gap, r.min_eig_gap);
  EXPECT_EQ(back.tol, r.tol);
  EXPECT_EQ(back.fingerprint_b, r.fingerprint_b);
  EXPECT_EQ(to_json(back).dump(), to_json(r).dump());
}

TEST(Cli, BoundExamples) {
  CliRun r = run({"bound", "--family", "theorem-main-reverse", "--branch", "i", "--a", "1", "--b", "16",
               "--v", "0.125", "--n", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("gap: 3.4142136"), std::string::npos) << r.out;

  r = run({"bound", "--family", "reverse-young-basic", "--a", "1", "--b", "4", "--v", "0.3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("hypothesis_ok: false"), std::string::npos);

  r = run({"bound", "--family", "kittaneh-manasrah", "--a", "0", "--b", "1", "--v", "0.5"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_FALSE(r.err.empty());

  r = run({"bound", "--family", "theorem-main-reverse", "--branch", "i", "--a", "1", "--b", "16",
           "--v", "1/8"});
  EXPECT_EQ(r.code, kExitInputError) << "missing n";
  r = run({"bound", "--family", "no-such", "--a", "1", "--b", "2", "--v", "0.5"});
  EXPECT_EQ(r.code, kExitInputError);
  r = run({"bound", "--family", "theorem_main_reverse", "--branch", "iii", "--a", "1", "--b", "2",
           "--v", "0.5", "--n", "2"});
  EXPECT_EQ(r.code, kExitInputError);
  r = run({"bound", "--family", "theorem-t6", "--a", "1", "--b", "2", "--v", "0.5"});
  EXPECT_EQ(r.code, kExitInputError);
  r = run({"bound"});
  EXPECT_EQ(r.code, kExitInputError);
  r = run({});
  EXPECT_EQ(r.code, kExitInputError);
  r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
}

TEST(Cli, FractionsMatchDecimals) {
  EXPECT_EQ(parse_real("1/8"), 0.125);
  EXPECT_EQ(parse_real("-3/4"), -0.75);
  EXPECT_EQ(parse_real("+1/3"), 1.0 / 3.0);
  EXPECT_EQ(parse_real("2.5e-1"), 0.25);
  for (const char* bad : {"1/0", "1/", "/2", "a/b", "1/2/3", "", "0.5x", "inf", "nan"})
    EXPECT_THROW(parse_real(bad), input_error) << bad;

  const CliRun frac = run({"--format", "json", "bound", "--family", "theorem-main-reverse", "--branch",
                        "i", "--a", "1", "--b", "16", "--v", "1/8", "--n", "2"});
  const CliRun dec = run({"--format", "json", "bound", "--family", "theorem-main-reverse", "--branch",
                       "i", "--a", "1", "--b", "16", "--v", "0.125", "--n", "2"});
  EXPECT_EQ(frac.code, 0);
  EXPECT_EQ(frac.out, dec.out);
}

TEST(Cli, JsonSchemaAndCsvAgree) {
  const CliRun j = run({"--format", "json", "check-scalar", "--a", "0.7", "--b", "13", "--v", "-1.25",
                     "--n", "3"});
  const CliRun c = run({"--format", "csv", "check-scalar", "--a", "0.7", "--b", "13", "--v", "-1.25",
                     "--n", "3"});
  ASSERT_EQ(j.code, c.code);
  const Json doc = Json::parse(j.out);
  for (const char* key : {"tool_version", "config", "results", "failures"}) EXPECT_TRUE(doc.contains(key));
  const Json& results = doc.at("results");
  ASSERT_FALSE(results.empty());
  for (const auto& r : results)
    for (const char* key : {"family", "branch", "inputs", "lhs", "rhs", "gap", "hypothesis_ok", "holds"})
      EXPECT_TRUE(r.contains(key)) << key;

  const auto lines = split(c.out, '\n');
  ASSERT_EQ(lines.size(), results.size() + 1);
  const auto header = split(lines[0], ',');
  for (std::size_t row = 0; row < results.size(); ++row) {
    const auto cells = split(lines[row + 1], ',');
    ASSERT_EQ(cells.size(), header.size());
    for (std::size_t k = 0; k < header.size(); ++k) {
      const Json& v = results[row].at(Json::json_pointer("/" + [&] {
        std::string p = header[k];
        for (auto& ch : p)
          if (ch == '.') ch = '/';
        return p;
      }()));
      if (v.is_number_float()) {
        EXPECT_EQ(std::stod(cells[k]), v.get<double>()) << header[k];
      }
    }
  }
}

TEST(Cli, CheckOperatorFiles) {
  TempDir dir;
  const std::string one = dir.write("one.txt", "1\n1\n");
  const std::string sixteen = dir.write("sixteen.txt", "# B\n1\n16\n");
  CliRun r = run({"check-operator", "--family", "theorem-t6", "--branch", "i", "--a-file", one,
               "--b-file", sixteen, "--v", "0.125", "--n", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("min_eig_gap: 3.4142136"), std::string::npos) << r.out;

  const std::string m = dir.write("m.txt", "2\n2 0.5\n0.5 1\n");
  const std::string m2 = dir.write("m2.txt", "2\n2 0.5\n0.5 1\n");
  r = run({"check-operator", "--family", "t6", "--branch", "ii", "--a-file", m, "--b-file", m2,
           "--v", "0.9", "--n", "3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("min_eig_gap: 0\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("degenerate: true"), std::string::npos);

  const std::string asym = dir.write("asym.txt", "2\n2 0.5\n0.7 1\n");
  r = run({"check-operator", "--family", "theorem-t6", "--branch", "i", "--a-file", asym,
           "--b-file", m, "--v", "0.9", "--n", "3"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("||M - M^T||_F = 0.283"), std::string::npos) << r.err;

  const std::string indefinite = dir.write("indef.txt", "2\n1 2\n2 1\n");
  r = run({"check-operator", "--family", "theorem-t6", "--branch", "i", "--a-file", indefinite,
           "--b-file", m, "--v", "0.9", "--n", "3"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("positive definite"), std::string::npos);

  r = run({"check-operator", "--family", "theorem-t6", "--branch", "i", "--a-file",
           dir.file("missing.txt"), "--b-file", m, "--v", "0.9", "--n", "3"});
  EXPECT_EQ(r.code, kExitInputError);

  r = run({"--format", "json", "check-operator", "--family", "corollary-c33", "--branch", "ii",
           "--a-file", one, "--b-file", dir.write("four.txt", "1\n4\n"), "--v", "-1", "--n", "1"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NEAR(Json::parse(r.out).at("results").at(0).at("min_eig_gap").get<double>(), 7.625, 1e-12);
}

TEST(Cli, Repro) {
  const CliRun r = run({"repro"});
  EXPECT_EQ(r.code, kExitOk);
  for (const char* line : {"inputs: a=1 b=16 v=1/8\n", "(19): 4.875\n",
                           "(15) recomputed: 6.1887085\n", "(15) reported: 6.2892\n",
                           "(5) full rhs n=2: 6.2892136\n", "tighter: (19)\n"})
    EXPECT_NE(r.out.find(line), std::string::npos) << line << "\n" << r.out;

  const CliRun j = run({"--format", "json", "repro"});
  const Json doc = Json::parse(j.out);
  EXPECT_EQ(doc.at("results").at(0).at("gap_bound").get<double>(), 4.875);
  EXPECT_EQ(doc.at("tighter"), "(19)");
}

TEST(Cli, Compare) {
  const CliRun r = run({"compare", "--a", "1", "--b", "16", "--v", "1/8"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("4.875"), std::string::npos);
  EXPECT_NE(r.out.find("6.1887085"), std::string::npos);
}

TEST(Cli, SuiteExitCodesAndDeterminism) {
  TempDir dir;
  EXPECT_EQ(run({"suite", "--trials", "0"}).code, kExitInputError);
  EXPECT_EQ(run({"suite", "--families", "bogus", "--trials", "2"}).code, kExitInputError);
  EXPECT_EQ(run({"suite", "--config", dir.file("absent.cfg")}).code, kExitInputError);

  const std::vector<std::string> base{"suite", "--families", "all", "--trials", "30", "--seed",
                                      "42", "--grid", "6", "--dims", "1,2,4"};
  auto with_out = [&](const std::string& name) {
    auto args = base;
    args.insert(args.end(), {"--out", dir.file(name)});
    return args;
  };
  const CliRun r1 = run(with_out("r1.json"));
  const CliRun r2 = run(with_out("r2.json"));
  EXPECT_EQ(r1.code, kExitOk) << r1.out;
  EXPECT_EQ(r2.code, kExitOk);
  const Json j1 = Json::parse(slurp(dir.file("r1.json")));
  const Json j2 = Json::parse(slurp(dir.file("r2.json")));
  EXPECT_EQ(j1.at("total_failures"), 0);
  EXPECT_EQ(deterministic_dump(j1), deterministic_dump(j2));

  const std::string cfg = dir.write("suite.cfg", "trials = 30\nseed = 42\ngrid = 6\ndims = 1,2,4\n");
  const CliRun r3 = run({"suite", "--config", cfg, "--out", dir.file("r3.json")});
  EXPECT_EQ(r3.code, kExitOk);
  EXPECT_EQ(deterministic_dump(Json::parse(slurp(dir.file("r3.json")))), deterministic_dump(j1));
}

TEST(Cli, SeedEnvironmentOverride) {
  TempDir dir;
  const std::vector<std::string> args{"suite", "--families", "scalar", "--trials", "3",
                                      "--seed", "1", "--out", dir.file("env.json")};
  ::setenv("MEANBOUND_SEED", "99", 1);
  const CliRun r = run(args);
  ::unsetenv("MEANBOUND_SEED");
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(Json::parse(slurp(dir.file("env.json"))).at("config").at("seed"), 99u);

  ::setenv("MEANBOUND_SEED", "abc", 1);
  const CliRun bad = run(args);
  ::unsetenv("MEANBOUND_SEED");
  EXPECT_EQ(bad.code, kExitInputError);
}
