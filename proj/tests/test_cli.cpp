#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bench.hpp"
#include "cli.hpp"
#include "document.hpp"
#include "verify.hpp"

using namespace hyperdet;
using namespace hyperdet::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hyperdet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Scratch {
  fs::path dir;
  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() /
          ("hyperdet_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text) const {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("document parsing") {
  const auto doc = parse_document(R"({"shape": [2, 2], "data": [1, 3, 2, 4]})");
  CHECK(doc.shape == Shape{2, 2});
  CHECK(doc.kind == EntryKind::number);
  const auto m = to_hypermatrix<Rational>(doc);
  CHECK(m == matrix_from_rows<Rational>({{1, 2}, {3, 4}}));

  const auto rows = parse_document(R"({"shape": [2, 2], "data": [1, 2, 3, 4]})", Layout::last_axis_fastest);
  CHECK(rows == doc);

  const auto q = parse_document(R"({"shape": [2], "data": ["1/3", "-2/4"], "symmetric": false})");
  CHECK(q.kind == EntryKind::rational);
  CHECK(q.reals[1] == Rational(-1L, 2L));
  CHECK(q.symmetric == false);

  const auto c = parse_document(R"({"shape": [1, 1], "data": [[0.5, -1]]})");
  CHECK(c.kind == EntryKind::complex);
  CHECK(to_hypermatrix<Complex>(c)[0] == Complex(0.5, -1));
  CHECK_THROWS_AS(to_hypermatrix<double>(c), ParseError);
}

TEST_CASE("document errors name the place") {
  auto message = [](const char* text) {
    try {
      parse_document(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\"shape\": [2],\n \"data\": [1, }").find("line 2") != std::string::npos);
  CHECK(message(R"({"shape": [2], "data": [1]})").find("data") != std::string::npos);
  CHECK(message(R"({"shape": [2], "data": [1, "x"]})").find("data") != std::string::npos);
  CHECK(message(R"({"shape": [2], "data": [1, 2], "extra": 1})").find("extra") != std::string::npos);
  CHECK(message(R"({"data": [1, 2]})").find("shape") != std::string::npos);
  CHECK_THROWS_AS(parse_layout("diagonal"), ParseError);
}

TEST_CASE("document round trip") {
  for (const char* text : {R"({"shape": [2, 2], "data": [1, 3, 2, 4]})",
                           R"({"shape": [2, 2], "data": ["1/3", "2", "-5/7", "0"], "symmetric": true})",
                           R"({"shape": [2], "data": [[1, 2], [0.25, -3]]})",
                           R"({"shape": [3], "data": [0.1, -2.5, 1e-3]})"}) {
    const auto doc = parse_document(text);
    CHECK(parse_document(serialize_document(doc)) == doc);
  }
}

TEST_CASE("hdet subcommand") {
  Scratch s;
  const auto m = s.file("m.json", R"({"shape": [2, 2], "data": [1, 3, 2, 4]})");
  auto r = run_cli({"hdet", "--input", m});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "-2\nengine: levicivita\n");

  r = run_cli({"hdet", "--input", m, "--engine", "naive", "--backend", "float64"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "-2\nengine: naive\n");

  const auto cube = s.file("c.json", R"({"shape": [2, 2, 2], "data": [1, 2, 3, 4, 5, 6, 7, 8]})");
  r = run_cli({"hdet", "--input", cube});
  CHECK(r.out == "0\nengine: odd-order short-circuit\n");

  const auto ghz = s.file("g.json", R"({"shape": [2, 2, 2, 2], "data": [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]})");
  r = run_cli({"hdet", "--input", ghz, "--cache-dir", (s.dir / "cache").string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "1\nengine: symmetric-fast\n");

  const auto lying = s.file("l.json", R"({"shape": [2, 2], "data": [1, 3, 2, 4], "symmetric": true})");
  r = run_cli({"hdet", "--input", lying});
  CHECK(r.code == kExitOk);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("hdet exit codes") {
  Scratch s;
  const auto rect = s.file("r.json", R"({"shape": [2, 3], "data": [1, 2, 3, 4, 5, 6]})");
  CHECK(run_cli({"hdet", "--input", rect}).code == kExitShape);
  const auto bad = s.file("b.json", R"({"shape": [2, 2], "data": [1, 2, 3]})");
  const auto r = run_cli({"hdet", "--input", bad});
  CHECK(r.code == kExitParse);
  CHECK(r.err.find("data") != std::string::npos);
  CHECK(run_cli({"hdet", "--input", (s.dir / "missing.json").string()}).code == kExitParse);
  CHECK(run_cli({"hdet"}).code == kExitParse);
  CHECK(run_cli({"hdet", "--input", rect, "--engine", "fastest"}).code == kExitParse);

  const auto m = s.file("m.json", R"({"shape": [2, 2], "data": [1, 3, 2, 4]})");
  CHECK(run_cli({"hdet", "--input", m, "--engine", "symmetric-fast"}).code == kExitShape);
  CHECK(run_cli({"hdet", "--input", m, "--engine", "levicivita", "--budget", "1"}).code == kExitResource);
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(ParseError("x")) == kExitParse);
  CHECK(exit_code_for(NormalizationError("x", 2.0)) == kExitParse);
  CHECK(exit_code_for(ShapeError("x")) == kExitShape);
  CHECK(exit_code_for(DomainError("x")) == kExitShape);
  CHECK(exit_code_for(SymmetryError("x")) == kExitShape);
  CHECK(exit_code_for(ResourceError("x", 2, 1)) == kExitResource);
  CHECK(exit_code_for(OverflowError("x")) == kExitResource);
  CHECK(exit_code_for(StorageError("x")) == kExitStorage);
}

TEST_CASE("precompute subcommand") {
  Scratch s;
  const auto dir = (s.dir / "cache").string();
  auto r = run_cli({"precompute", "--d", "2", "--N", "4", "--cache-dir", dir});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("side 5") != std::string::npos);
  CHECK(r.out.find("entries 25") != std::string::npos);
  CHECK(r.out.find("built") != std::string::npos);
  r = run_cli({"precompute", "--d", "2", "--N", "4", "--cache-dir", dir});
  CHECK(r.out.find("loaded from cache") != std::string::npos);

  r = run_cli({"precompute", "--d", "2", "--N", "3", "--cache-dir", dir});
  CHECK(r.code == kExitOk);
  CHECK_FALSE(r.err.empty());

  r = run_cli({"precompute", "--d", "3", "--N", "20", "--cache-dir", dir, "--budget", "1000"});
  CHECK(r.code == kExitResource);
  CHECK(r.err.find("231^3") != std::string::npos);
}

TEST_CASE("concurrence subcommand") {
  Scratch s;
  const auto bell = s.file("bell.json",
                           R"({"d": 2, "n": 2, "amplitudes": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]})");
  auto r = run_cli({"concurrence", "--input", bell});
  CHECK(r.code == kExitOk);
  CHECK(std::fabs(std::stod(r.out) - 1.0) <= 1e-10);

  const auto odd = s.file("odd.json", R"({"d": 2, "n": 3, "amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0]]})");
  CHECK(run_cli({"concurrence", "--input", odd}).code == kExitShape);
  const auto unnorm = s.file("u.json", R"({"d": 2, "n": 2, "amplitudes": [[1, 0], [1, 0], [0, 0], [0, 0]]})");
  CHECK(run_cli({"concurrence", "--input", unnorm}).code == kExitParse);
  const auto prod = s.file("p.json", R"({"d": 2, "n": 2, "amplitudes": [[0, 0], [1, 0], [0, 0], [0, 0]]})");
  r = run_cli({"concurrence", "--input", prod});
  CHECK(r.code == kExitOk);
  CHECK(std::stod(r.out) == 0.0);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("verify subcommand") {
  const auto a = run_cli({"verify", "--seed", "5", "--sizes", "2x2,3x2", "--trials", "3"});
  const auto b = run_cli({"verify", "--seed", "5", "--sizes", "2x2,3x2", "--trials", "3"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.find("FAIL") == std::string::npos);

  const auto broken = run_cli({"verify", "--sizes", "2x2", "--trials", "3", "--inject-fault"});
  CHECK(broken.code == kExitVerifyFailed);
  CHECK(broken.out.find("FAIL") != std::string::npos);
  CHECK(broken.out.find("\"shape\"") != std::string::npos);

  CHECK(parse_sizes("2x4,3x2") == std::vector<std::pair<std::size_t, std::size_t>>{{2, 4}, {3, 2}});
  CHECK_THROWS_AS(parse_sizes("2by4"), ParseError);
  CHECK(run_cli({"verify", "--sizes", "2by4"}).code == kExitParse);
}

TEST_CASE("bench json lines") {
  const auto r = run_cli({"bench", "--d", "2", "--N", "2,4", "--jsonl", "-"});
  CHECK(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    for (const char* key : {"engine", "d", "N", "nanos", "value", "agreed", "work", "complexity_ratio", "prior_art"}) {
      CHECK(j.contains(key));
    }
    CHECK(j["agreed"] == true);
    ++count;
  }
  CHECK(count == 6);
}

TEST_CASE("bench skips engines over budget") {
  BenchConfig cfg;
  cfg.orders = {2, 8};
  cfg.budget.max_epsilon_nonzeros = 100;
  const auto report = run_bench(cfg);
  bool skipped = false;
  for (const auto& row : report.rows) {
    if (row.order == 8 && row.engine == Engine::levicivita) {
      skipped = row.skipped;
      CHECK_FALSE(row.skip_reason.empty());
    }
  }
  CHECK(skipped);
  std::ostringstream out;
  print_jsonl(out, report);
  CHECK(out.str().find("null") != std::string::npos);
}

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("usage errors") {
  CHECK(run_cli({}).code == kExitParse);
  CHECK(run_cli({"frobnicate"}).code == kExitParse);
  CHECK(run_cli({"--help"}).code == kExitOk);
}

}  // TEST_SUITE
