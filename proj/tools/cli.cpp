#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "flattrans/codec.hpp"
#include "flattrans/generator.hpp"
#include "flattrans/printer.hpp"
#include "flattrans/strategy.hpp"

namespace flattrans::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalFlags {
  std::size_t fuel = kDefaultFuel;
  std::string trace_file;
  std::uint64_t seed = 1;
  bool csv = false;
};

/// Signals a command failure carrying its exit code; the message is
/// printed by `run`.
struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kDecodeError, "cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kDecodeError, "cannot write '" + path + "'"};
  out << text;
}

Program load(const std::string& path) {
  auto text = read_file(path);
  try {
    return decode_program(text);
  } catch (const DecodeError& e) {
    throw Failure{kDecodeError, path + ": " + e.what()};
  }
}

StrategyKind strategy_or_fail(const std::string& name) {
  auto kind = parse_strategy(name);
  if (!kind) throw Failure{kUsageError, "unknown strategy '" + name + "' (expected cs, ms or ds)"};
  return *kind;
}

std::vector<Stage> pipeline_or_fail(const std::string& spec, StrategyKind strategy) {
  try {
    return parse_pipeline(spec, strategy);
  } catch (const UnknownRule& e) {
    throw Failure{kUsageError, e.what()};
  }
}

PipelineResult run_pipeline(const std::vector<Stage>& stages, const Program& program,
                            const PipelineOptions& options) {
  try {
    return apply_pipeline(stages, program, options);
  } catch (const FuelExhausted& e) {
    throw Failure{kFuelExhausted, e.what()};
  }
}

struct TransformArgs {
  std::string input;
  std::string output;
  std::string pipeline = "simplify";
  std::string strategy = "ms";
};

int cmd_transform(const TransformArgs& args, const GlobalFlags& flags, std::ostream& out,
                  std::ostream& err) {
  auto strategy = strategy_or_fail(args.strategy);
  auto stages = pipeline_or_fail(args.pipeline, strategy);
  auto program = load(args.input);
  PipelineOptions options{flags.fuel, !flags.trace_file.empty()};
  auto result = run_pipeline(stages, program, options);

  auto json = encode_program(result.program) + "\n";
  std::ostream& log = args.output.empty() ? err : out;
  if (args.output.empty()) {
    out << json;
  } else {
    write_file(args.output, json);
  }
  for (const auto& f : result.report.functions) {
    log << f.name << ": " << f.rewrites << " rewrites\n";
  }
  log << "total: " << result.report.total_rewrites() << " rewrites\n";
  if (!flags.trace_file.empty()) write_file(flags.trace_file, format_trace(result.report.trace));
  return kOk;
}

int cmd_check_anf(const std::string& input, std::ostream& out) {
  auto program = load(input);
  bool clean = true;
  for (const auto& f : program.functions) {
    for (const auto& path : anf_violations(f.body)) {
      clean = false;
      out << f.name << '\t' << path_to_string(path) << '\n';
    }
  }
  if (clean) {
    out << "ok: " << program.functions.size() << " functions in A-normal form\n";
    return kOk;
  }
  return kNotAnf;
}

std::int64_t median_ms(std::vector<std::chrono::nanoseconds> times) {
  if (times.empty()) return 0;
  std::sort(times.begin(), times.end());
  auto mid = times.size() / 2;
  double ns = times.size() % 2 == 1
                  ? static_cast<double>(times[mid].count())
                  : (static_cast<double>(times[mid - 1].count()) +
                     static_cast<double>(times[mid].count())) /
                        2.0;
  return static_cast<std::int64_t>(std::llround(ns / 1e6));
}

struct BenchArgs {
  std::string corpus;
  std::string pipeline = "simplify";
  std::size_t reps = 3;
};

int cmd_bench(const BenchArgs& args, const GlobalFlags& flags, std::ostream& out,
              std::ostream& err) {
  if (!fs::is_directory(args.corpus)) {
    throw Failure{kDecodeError, "'" + args.corpus + "' is not a directory"};
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.corpus)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  constexpr std::array<StrategyKind, 3> kinds{StrategyKind::Chaotic, StrategyKind::Mixed,
                                              StrategyKind::Deterministic};
  std::array<std::vector<Stage>, 3> pipelines;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    pipelines[i] = pipeline_or_fail(args.pipeline, kinds[i]);
  }

  int status = kOk;
  std::vector<BenchRow> rows;
  for (const auto& file : files) {
    try {
      auto program = load(file.string());
      BenchRow row{program.module_name, fs::file_size(file), program.functions.size()};
      std::array<std::size_t, 3> trans{};
      std::array<std::int64_t, 3> ms{};
      for (std::size_t i = 0; i < kinds.size(); ++i) {
        std::vector<std::chrono::nanoseconds> times;
        for (std::size_t r = 0; r < std::max<std::size_t>(1, args.reps); ++r) {
          auto start = std::chrono::steady_clock::now();
          auto result = run_pipeline(pipelines[i], program, PipelineOptions{flags.fuel, false});
          times.push_back(std::chrono::steady_clock::now() - start);
          trans[i] = result.report.total_rewrites();
        }
        ms[i] = median_ms(std::move(times));
      }
      if (trans[0] != trans[1] || trans[1] != trans[2]) {
        err << "warning: " << file.filename().string() << ": rewrite counts differ across strategies ("
            << trans[0] << "/" << trans[1] << "/" << trans[2] << ")\n";
      }
      row.trans = trans[0];
      row.cs_ms = ms[0];
      row.ms_ms = ms[1];
      row.ds_ms = ms[2];
      rows.push_back(std::move(row));
    } catch (const Failure& f) {
      err << "warning: skipping " << file.filename().string() << ": " << f.message << '\n';
      status = f.code;
    }
  }
  out << (flags.csv ? format_bench_csv(rows) : format_bench_table(rows));
  return status;
}

int cmd_show(const std::string& input, std::ostream& out) {
  out << to_string(load(input));
  return kOk;
}

struct GenerateArgs {
  std::string output;
  std::string module = "Gen";
  std::size_t functions = 8;
  std::size_t nodes = 400;
};

int cmd_generate(const GenerateArgs& args, const GlobalFlags& flags, std::ostream& out) {
  auto program = generate_program(
      GeneratorOptions{flags.seed, args.module, args.functions, args.nodes});
  auto json = encode_program(program) + "\n";
  if (args.output.empty()) {
    out << json;
  } else {
    write_file(args.output, json);
  }
  return kOk;
}

}  // namespace

std::string format_bench_table(const std::vector<BenchRow>& rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.module.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "Module" << std::right << " | "
      << std::setw(8) << "Size" << std::setw(7) << "Funcs" << std::setw(7) << "Trans" << " | "
      << std::setw(8) << "CS" << std::setw(8) << "MS" << std::setw(8) << "DS" << '\n';
  out << std::string(width + 3 + 22 + 3 + 24, '-') << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.module << std::right << " | "
        << std::setw(8) << r.size_bytes << std::setw(7) << r.funcs << std::setw(7) << r.trans
        << " | " << std::setw(8) << r.cs_ms << std::setw(8) << r.ms_ms << std::setw(8) << r.ds_ms
        << '\n';
  }
  return out.str();
}

std::string format_bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "module,size,funcs,trans,cs_ms,ms_ms,ds_ms\n";
  for (const auto& r : rows) {
    out << r.module << ',' << r.size_bytes << ',' << r.funcs << ',' << r.trans << ',' << r.cs_ms
        << ',' << r.ms_ms << ',' << r.ds_ms << '\n';
  }
  return out.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rewrite FlatCurry-style IR programs with composable transformation rules"};
  app.name("flattrans");
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--fuel", flags.fuel, "Maximum rewrites per function and stage");
  app.add_option("--trace", flags.trace_file, "Write the derivation trace to FILE");
  app.add_option("--seed", flags.seed, "Seed for the program generator");
  app.add_flag("--csv", flags.csv, "Print benchmark results as CSV");

  TransformArgs transform;
  auto* transform_cmd = app.add_subcommand("transform", "Apply a rule pipeline to a program");
  transform_cmd->fallthrough();
  transform_cmd->add_option("input", transform.input, "Program JSON file")->required();
  transform_cmd->add_option("-p,--pipeline", transform.pipeline,
                            "Stages separated by ';', parallel rules joined by '|'");
  transform_cmd->add_option("-s,--strategy", transform.strategy, "cs, ms or ds");
  transform_cmd->add_option("-o,--output", transform.output, "Output file (default: stdout)");

  std::string check_input;
  auto* check_cmd = app.add_subcommand("check-anf", "Check that every body is in A-normal form");
  check_cmd->fallthrough();
  check_cmd->add_option("input", check_input, "Program JSON file")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time a pipeline under all three strategies");
  bench_cmd->fallthrough();
  bench_cmd->add_option("corpus", bench.corpus, "Directory of program JSON files")->required();
  bench_cmd->add_option("-p,--pipeline", bench.pipeline, "Pipeline to run");
  bench_cmd->add_option("-r,--reps", bench.reps, "Repetitions per strategy (median is reported)");

  std::string show_input;
  auto* show_cmd = app.add_subcommand("show", "Pretty-print a program");
  show_cmd->fallthrough();
  show_cmd->add_option("input", show_input, "Program JSON file")->required();

  GenerateArgs generate;
  auto* generate_cmd = app.add_subcommand("generate", "Write a seeded random program");
  generate_cmd->fallthrough();
  generate_cmd->add_option("-o,--output", generate.output, "Output file (default: stdout)");
  generate_cmd->add_option("--module", generate.module, "Module name");
  generate_cmd->add_option("--functions", generate.functions, "Number of functions");
  generate_cmd->add_option("--nodes", generate.nodes, "Approximate total body size");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (transform_cmd->parsed()) return cmd_transform(transform, flags, out, err);
    if (check_cmd->parsed()) return cmd_check_anf(check_input, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, flags, out, err);
    if (show_cmd->parsed()) return cmd_show(show_input, out);
    if (generate_cmd->parsed()) return cmd_generate(generate, flags, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  }
  return kUsageError;
}

}  // namespace flattrans::cli
