#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "bench.hpp"
#include "document.hpp"
#include "hyperdet/cache.hpp"
#include "hyperdet/quantum.hpp"
#include "verify.hpp"

namespace hyperdet::cli {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const NormalizationError*>(&e) ||
      dynamic_cast<const ArgumentError*>(&e)) {
    return kExitParse;
  }
  if (dynamic_cast<const ShapeError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const SymmetryError*>(&e) || dynamic_cast<const IndexError*>(&e)) {
    return kExitShape;
  }
  if (dynamic_cast<const ResourceError*>(&e) || dynamic_cast<const OverflowError*>(&e)) {
    return kExitResource;
  }
  return kExitStorage;
}

namespace {

struct Options {
  std::string input;
  std::string engine = "auto";
  std::string backend;
  std::string cache_dir;
  std::optional<std::uint64_t> budget;
  std::optional<double> tolerance;
  std::uint64_t seed = 1;
  std::string layout = "first-axis-fastest";
  // precompute / bench
  std::size_t d = 2;
  std::size_t order = 0;
  std::vector<std::size_t> orders{2, 4, 6, 8, 10, 12};
  std::vector<std::string> engines{"naive", "levicivita", "symmetric"};
  std::string jsonl;
  // verify
  std::string sizes;
  std::size_t trials = 10;
  bool inject_fault = false;
};

Budget budget_of(const Options& o) {
  Budget b;
  if (o.budget) {
    b.max_epsilon_nonzeros = *o.budget;
    b.max_contractor_entries = *o.budget;
  }
  return b;
}

template <Scalar T>
int hdet_with(const Options& o, const TensorDocument& doc, std::ostream& out, std::ostream& err) {
  const auto a = to_hypermatrix<T>(doc);
  HdetOptions<T> opts;
  opts.engine = parse_engine_choice(o.engine);
  opts.budget = budget_of(o);
  if (o.tolerance) opts.tolerance = *o.tolerance;
  std::unique_ptr<cache::ContractorCache<T>> store;
  if (!o.cache_dir.empty()) {
    store = std::make_unique<cache::ContractorCache<T>>(o.cache_dir, opts.budget);
    opts.contractors = store.get();
  }
  if (doc.symmetric.value_or(false) && a.is_cubical() && !is_symmetric(a, opts.tolerance)) {
    err << "warning: document is marked symmetric but the data is not\n";
  }
  const auto r = hdet(a, opts);
  out << format_scalar(r.value) << '\n';
  out << "engine: " << engine_name(r.engine) << '\n';
  return kExitOk;
}

int cmd_hdet(const Options& o, std::ostream& out, std::ostream& err) {
  const auto doc = read_document(o.input, parse_layout(o.layout));
  Backend backend = doc.kind == EntryKind::complex ? Backend::complex128 : Backend::rational;
  if (!o.backend.empty()) backend = parse_backend(o.backend);
  switch (backend) {
    case Backend::rational:
      return hdet_with<Rational>(o, doc, out, err);
    case Backend::float64:
      return hdet_with<double>(o, doc, out, err);
    case Backend::complex128:
      return hdet_with<Complex>(o, doc, out, err);
  }
  return kExitOk;
}

template <Scalar T>
int precompute_with(const Options& o, std::ostream& out, std::ostream& err) {
  const Budget budget = budget_of(o);
  const std::uint64_t side = count_monotone(o.d, o.order);
  const std::uint64_t entries = contractor_entries(o.d, o.order);
  out << "contractor d=" << o.d << " N=" << o.order << " backend=" << backend_name(ScalarTraits<T>::backend)
      << '\n';
  out << "side " << side << '\n';
  out << "entries " << entries << '\n';
  if (o.d >= 2 && o.order % 2 == 1) {
    err << "warning: N is odd, so the contractor is identically zero\n";
  }
  bool built = false;
  cache::ensure_contractor<T>(o.d, o.order, o.cache_dir, budget, &built);
  const cache::CacheKey key{cache::Kind::contractor, o.d, o.order, ScalarTraits<T>::backend};
  out << "path " << (std::filesystem::path(o.cache_dir) / key.filename()).string() << '\n';
  out << (built ? "built" : "loaded from cache") << '\n';
  return kExitOk;
}

int cmd_precompute(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.d < 1 || o.order < 1) throw ArgumentError("precompute needs --d and --N of at least 1");
  switch (o.backend.empty() ? Backend::rational : parse_backend(o.backend)) {
    case Backend::rational:
      return precompute_with<Rational>(o, out, err);
    case Backend::float64:
      return precompute_with<double>(o, out, err);
    case Backend::complex128:
      return precompute_with<Complex>(o, out, err);
  }
  return kExitOk;
}

int cmd_concurrence(const Options& o, std::ostream& out, std::ostream& err) {
  const auto s = quantum::read_state_document(o.input);
  HdetOptions<Complex> opts;
  opts.engine = parse_engine_choice(o.engine);
  opts.budget = budget_of(o);
  if (o.tolerance) opts.tolerance = *o.tolerance;
  std::unique_ptr<cache::ContractorCache<Complex>> store;
  if (!o.cache_dir.empty()) {
    store = std::make_unique<cache::ContractorCache<Complex>>(o.cache_dir, opts.budget);
    opts.contractors = store.get();
  }
  const auto r = quantum::concurrence(s, opts);
  if (!r.boson) err << "warning: state is not a boson; a general engine computed the value\n";
  out << format_scalar(r.value) << '\n';
  out << "engine: " << engine_name(r.engine) << '\n';
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  VerifyConfig cfg;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.inject_fault = o.inject_fault;
  if (!o.sizes.empty()) cfg.sizes = parse_sizes(o.sizes);
  const bool ok = print_verify(out, run_verify(cfg));
  out << (ok ? "all properties passed\n" : "some properties FAILED\n");
  return ok ? kExitOk : kExitVerifyFailed;
}

Engine bench_engine(const std::string& name) {
  switch (parse_engine_choice(name)) {
    case EngineChoice::naive:
      return Engine::naive;
    case EngineChoice::levicivita:
      return Engine::levicivita;
    case EngineChoice::symmetric:
      return Engine::symmetric_fast;
    case EngineChoice::automatic:
      break;
  }
  throw ArgumentError("bench needs explicit engines (naive, levicivita, symmetric)");
}

int cmd_bench(const Options& o, std::ostream& out) {
  BenchConfig cfg;
  cfg.d = o.d;
  cfg.orders = o.orders;
  cfg.engines.clear();
  for (const auto& e : o.engines) cfg.engines.push_back(bench_engine(e));
  cfg.backend = o.backend.empty() ? Backend::float64 : parse_backend(o.backend);
  cfg.budget = budget_of(o);
  cfg.seed = o.seed;
  if (!o.cache_dir.empty()) cfg.cache_dir = o.cache_dir;
  const auto report = run_bench(cfg);
  if (o.jsonl == "-") {
    print_jsonl(out, report);
    return kExitOk;
  }
  print_table(out, report);
  if (!o.jsonl.empty()) {
    std::ofstream f(o.jsonl);
    if (!f) throw StorageError("cannot write " + o.jsonl);
    print_jsonl(f, report);
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cayley's first hyperdeterminant of cubical hypermatrices"};
  app.require_subcommand(1);
  Options o;

  auto add_budget = [&](CLI::App* c) {
    c->add_option("--budget", o.budget, "refuse Levi-Civita powers and contractors above this size");
  };
  auto add_engine = [&](CLI::App* c) {
    c->add_option("--engine", o.engine, "auto, naive, levicivita or symmetric")
        ->check(CLI::IsMember({"auto", "naive", "levicivita", "symmetric", "symmetric-fast"}));
  };
  auto add_backend = [&](CLI::App* c) {
    c->add_option("--backend", o.backend, "rational, float64 or complex128")
        ->check(CLI::IsMember({"rational", "float64", "complex128"}));
  };

  auto* hdet_cmd = app.add_subcommand("hdet", "hyperdeterminant of a tensor document");
  hdet_cmd->add_option("--input", o.input, "tensor document (JSON)")->required();
  add_engine(hdet_cmd);
  add_backend(hdet_cmd);
  hdet_cmd->add_option("--cache-dir", o.cache_dir, "contractor cache directory");
  add_budget(hdet_cmd);
  hdet_cmd->add_option("--tolerance", o.tolerance, "symmetry tolerance for float backends");
  hdet_cmd->add_option("--layout", o.layout, "order of the flat data list")
      ->check(CLI::IsMember({"first-axis-fastest", "last-axis-fastest"}));

  auto* pre_cmd = app.add_subcommand("precompute", "build and store a contractor");
  pre_cmd->add_option("--d", o.d, "side length")->required();
  pre_cmd->add_option("--N", o.order, "order")->required();
  pre_cmd->add_option("--cache-dir", o.cache_dir, "contractor cache directory")->required();
  add_backend(pre_cmd);
  add_budget(pre_cmd);

  auto* conc_cmd = app.add_subcommand("concurrence", "2|hdet| of an even-particle state document");
  conc_cmd->add_option("--input", o.input, "state document (JSON)")->required();
  add_engine(conc_cmd);
  conc_cmd->add_option("--cache-dir", o.cache_dir, "contractor cache directory");
  add_budget(conc_cmd);
  conc_cmd->add_option("--tolerance", o.tolerance, "boson test tolerance");

  auto* ver_cmd = app.add_subcommand("verify", "run the cross-engine property suite");
  ver_cmd->add_option("--seed", o.seed, "random seed");
  ver_cmd->add_option("--sizes", o.sizes, "comma-separated DxN list, e.g. 2x4,3x2");
  ver_cmd->add_option("--trials", o.trials, "random inputs per property");
  ver_cmd->add_flag("--inject-fault", o.inject_fault)->group("");

  auto* bench_cmd = app.add_subcommand("bench", "time the engines against each other");
  bench_cmd->add_option("--d", o.d, "side length");
  bench_cmd->add_option("--N", o.orders, "orders to run")->delimiter(',');
  bench_cmd->add_option("--engines", o.engines, "engines to run")->delimiter(',');
  add_backend(bench_cmd);
  bench_cmd->add_option("--cache-dir", o.cache_dir, "contractor cache directory");
  add_budget(bench_cmd);
  bench_cmd->add_option("--seed", o.seed, "random seed");
  bench_cmd->add_option("--jsonl", o.jsonl, "write JSON lines here ('-' for stdout only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (hdet_cmd->parsed()) return cmd_hdet(o, out, err);
    if (pre_cmd->parsed()) return cmd_precompute(o, out, err);
    if (conc_cmd->parsed()) return cmd_concurrence(o, out, err);
    if (ver_cmd->parsed()) return cmd_verify(o, out);
    if (bench_cmd->parsed()) return cmd_bench(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitParse;
}

}  // namespace hyperdet::cli
