#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "rgcc/format.hpp"
#include "rgcc/generators.hpp"
#include "rgcc/oracle.hpp"
#include "rgcc/report.hpp"
#include "rgcc/roster.hpp"

using namespace rgcc;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Mode> parse_modes(const std::string& list) {
  std::vector<Mode> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_mode(item));
  if (out.empty()) throw InputError("no modes given");
  return out;
}

void print_matrix(const Matrix& m, const std::vector<int64_t>& labels) {
  for (const auto& row : m) {
    for (size_t k = 0; k < row.size(); ++k) std::cout << (k ? " " : "") << labels[row[k]];
    std::cout << '\n';
  }
}

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

Cnf random_cnf(int vars, int clauses, std::mt19937_64& rng) {
  Cnf f{vars, {}};
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> pool(vars);
    for (int v = 0; v < vars; ++v) pool[v] = v + 1;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> clause;
    for (int i = 0; i < std::min(3, vars); ++i) clause.push_back(rng() % 2 ? pool[i] : -pool[i]);
    f.clauses.push_back(clause);
  }
  return f;
}

SetFamily random_family(int universe, int sets, std::mt19937_64& rng) {
  SetFamily f{universe, {}};
  for (int i = 0; i < sets; ++i) {
    std::vector<int> s;
    for (int e = 1; e <= universe; ++e)
      if (rng() % 2) s.push_back(e);
    if (s.empty()) s.push_back(uniform(rng, 1, universe));
    f.sets.push_back(s);
  }
  return f;
}

Matching3d random_matching(int q, int triples, std::mt19937_64& rng) {
  Matching3d m{q, {}};
  for (int i = 0; i < triples; ++i) m.triples.push_back({uniform(rng, 0, q - 1), uniform(rng, 0, q - 1), uniform(rng, 0, q - 1)});
  return m;
}

Hypergraph random_hypergraph(int vertices, int edges, std::mt19937_64& rng) {
  Hypergraph h{vertices, {}};
  for (int i = 0; i < edges; ++i) {
    std::vector<int> e;
    for (int v = 0; v < vertices; ++v)
      if (rng() % 2) e.push_back(v);
    if (e.empty()) e.push_back(uniform(rng, 0, vertices - 1));
    h.edges.push_back(e);
  }
  return h;
}

std::vector<fs::path> instance_files(const std::string& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix models with row automata and column cardinalities"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance file");
  std::string solve_file;
  std::string solve_mode = "decomp";
  bool aggregate = false;
  double time_limit = 180;
  bool quiet = false;
  solve_cmd->add_option("file", solve_file, "Canonical instance file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--mode", solve_mode, "decomp, wa or cwa")->check(CLI::IsMember({"decomp", "wa", "cwa"}));
  solve_cmd->add_flag("--aggregate-words", aggregate, "Aggregated word conditions only");
  solve_cmd->add_option("--time-limit", time_limit, "Seconds")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--quiet", quiet, "Report only, no solution");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated instance in the canonical format");
  std::string kind;
  uint64_t seed = 0;
  int a = 3, b = 3, k = 2;
  std::string variant = "gcc";
  RandomParams rp;
  RosterParams roster;
  gen_cmd->add_option("kind", kind, "Generator")
      ->required()
      ->check(CLI::IsMember({"3sat", "exactcover", "3dm-dc", "3dm-bc", "hitting", "random", "roster"}));
  gen_cmd->add_option("--seed", seed, "Random seed");
  gen_cmd->add_option("--size", a, "Variables, universe, q or vertices of the source problem");
  gen_cmd->add_option("--items", b, "Clauses, sets, triples or edges of the source problem");
  gen_cmd->add_option("--k", k, "Hitting set size");
  gen_cmd->add_option("--variant", variant, "Hitting set column form")->check(CLI::IsMember({"gcc", "sum"}));
  gen_cmd->add_option("--rows", rp.rows);
  gen_cmd->add_option("--cols", rp.cols);
  gen_cmd->add_option("--values", rp.values);
  gen_cmd->add_option("--states", rp.states);
  gen_cmd->add_option("--tightness", rp.tightness);
  gen_cmd->add_option("--holes", rp.holes);
  gen_cmd->add_option("--resources", rp.resources);
  gen_cmd->add_option("--nurses", roster.nurses);
  gen_cmd->add_option("--days", roster.days);
  gen_cmd->add_option("--shifts", roster.shifts);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run every instance in a directory under several modes");
  std::string bench_dir;
  std::string modes = "decomp,wa,cwa";
  double bench_limit = 180;
  int jobs = 1;
  bench_cmd->add_option("dir", bench_dir, "Directory of canonical instance files")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--modes", modes, "Comma-separated modes");
  bench_cmd->add_flag("--aggregate-words", aggregate, "Aggregated word conditions only");
  bench_cmd->add_option("--time-limit", bench_limit, "Seconds per run")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force count and per-cell supports");
  std::string oracle_file;
  int64_t cap = OracleOptions{}.cap;
  oracle_cmd->add_option("file", oracle_file, "Canonical instance file")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--cap", cap, "Enumeration step cap");

  // import-nsp
  auto* import_cmd = app.add_subcommand("import-nsp", "Convert an NSP-style instance and case file");
  std::string nsp_instance, nsp_case;
  import_cmd->add_option("instance", nsp_instance)->required()->check(CLI::ExistingFile);
  import_cmd->add_option("case", nsp_case)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      const Document doc = load_document(solve_file);
      const RunResult res = run_document(fs::path(solve_file).filename().string(), doc, parse_mode(solve_mode),
                                         aggregate, time_limit);
      std::cout << report_header() << '\n' << format_report(res.report) << '\n';
      if (!quiet && res.report.status == RunStatus::kSat) {
        const auto* m = std::get_if<MatrixInstance>(&doc);
        print_matrix(res.solution, m ? m->labels : roster_to_matrix(std::get<RosterInstance>(doc)).labels);
      }
      return res.report.status == RunStatus::kTimeout ? 2 : 0;
    }
    if (*gen_cmd) {
      std::mt19937_64 rng(seed);
      if (kind == "3sat") {
        std::cout << emit_canonical(gen_3sat(random_cnf(a, b, rng)));
      } else if (kind == "exactcover") {
        std::cout << emit_canonical(gen_exact_cover(random_family(a, b, rng)));
      } else if (kind == "3dm-dc") {
        std::cout << emit_canonical(gen_3dm_dc(random_matching(a, b, rng)));
      } else if (kind == "3dm-bc") {
        std::cout << emit_canonical(gen_3dm_bc(random_matching(a, b, rng)));
      } else if (kind == "hitting") {
        std::cout << emit_canonical(gen_hitting_set(random_hypergraph(a, b, rng), k,
                                                    variant == "sum" ? HittingVariant::kSum : HittingVariant::kGcc));
      } else if (kind == "random") {
        rp.seed = seed;
        std::cout << emit_canonical(gen_random(rp));
      } else {
        roster.seed = seed;
        std::cout << emit_canonical(gen_roster(roster));
      }
      return 0;
    }
    if (*bench_cmd) {
      const std::vector<Mode> mode_list = parse_modes(modes);
      const auto files = instance_files(bench_dir);
      std::vector<Document> docs;
      for (const auto& f : files) docs.push_back(load_document(f.string()));
      const int runs = static_cast<int>(files.size() * mode_list.size());
      std::vector<RunReport> reports(static_cast<size_t>(runs));
      std::cout << report_header() << '\n';
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
      for (int i = 0; i < runs; ++i) {
        const size_t f = static_cast<size_t>(i) / mode_list.size();
        const Mode mode = mode_list[static_cast<size_t>(i) % mode_list.size()];
        reports[i] = run_document(files[f].filename().string(), docs[f], mode, aggregate, bench_limit).report;
#pragma omp critical(report_writer)
        std::cout << format_report(reports[i]) << std::endl;
      }
      std::cout << '\n' << format_summary(summarize(reports, mode_list));
      return 0;
    }
    if (*oracle_cmd) {
      const MatrixInstance inst = load_matrix(oracle_file);
      OracleOptions opts;
      opts.cap = cap;
      const int64_t count = brute_count_parallel(inst, opts);
      std::cout << "solutions " << count << '\n';
      const CellSets dc = brute_dc_parallel(inst, opts);
      for (int r = 0; r < inst.rows; ++r)
        for (int c = 0; c < inst.cols; ++c) {
          std::cout << "cell " << r << ' ' << c << ':';
          for (int v = 0; v < inst.num_values; ++v)
            if (dc[r][c].contains(v)) std::cout << ' ' << inst.labels[v];
          std::cout << '\n';
        }
      return 0;
    }
    if (*import_cmd) {
      std::vector<std::string> warnings;
      const RosterInstance r = parse_nsp(read_file(nsp_instance), read_file(nsp_case), &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      std::cout << emit_canonical(r);
      return 0;
    }
  } catch (const OracleRefused& e) {
    std::cerr << "oracle refused: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
