#include "structsheet/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "structsheet/errors.hpp"
#include "structsheet/pipeline.hpp"

namespace structsheet::cli {

namespace {

using nlohmann::ordered_json;

std::string join(const std::vector<CellAddress>& cells, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += sep;
    s += address_to_a1(cells[i]);
  }
  return s;
}

std::vector<std::string> a1_list(const std::vector<CellAddress>& cells) {
  std::vector<std::string> out;
  for (auto c : cells) out.push_back(address_to_a1(c));
  return out;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << data;
  if (!f) throw Error("write failed: " + path);
}

// Runs body and converts library errors to exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const CycleError& e) {
    err << "cycle detected: " << join(e.cells()) << "\n";
    return kCycle;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

// Maps each tagged row's value cell to the original address in its tag.
std::map<CellAddress, CellAddress> origin_tags(const Workbook& wb) {
  std::map<CellAddress, CellAddress> tags;
  for (const auto& [addr, content] : wb) {
    const auto* l = std::get_if<Label>(&content);
    if (!l || l->text.rfind(kOriginTag, 0) != 0) continue;
    CellAddress original = a1_to_address(std::string_view(l->text).substr(kOriginTag.size()));
    std::optional<CellAddress> value_cell;
    for (auto it = wb.cells().lower_bound(CellAddress{1, addr.row}); it != wb.end() && it->first < addr; ++it) {
      if (std::holds_alternative<Number>(it->second) || std::holds_alternative<Formula>(it->second))
        value_cell = it->first;
    }
    if (!value_cell) throw Error("origin tag at " + address_to_a1(addr) + " has no value cell");
    tags.emplace(*value_cell, original);
  }
  return tags;
}

}  // namespace

int cmd_restructure(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Workbook wb = load_workbook_file(cfg.input_paths.at(0));
    RestructureOptions options;
    options.grouping = cfg.input_grouping;
    options.empty_as_zero = cfg.empty_as_zero;
    const RestructureResult r = restructure(wb, options);
    for (const auto& w : r.placed.warnings) err << "warning: " << w << "\n";
    if (!r.discrepancies.empty()) {
      err << "internal error: restructured workbook changes values\n";
      for (const auto& d : r.discrepancies)
        err << address_to_a1(d.address) << "\t" << format_value(d.value_a) << "\t" << format_value(d.value_b)
            << "\n";
      return kNotPreserved;
    }
    write_file(cfg.output_path, save_workbook_text(r.placed.workbook));
    if (cfg.overview_path) write_file(*cfg.overview_path, emit_overview_dot(r.modules));

    const auto& mg = r.modules;
    if (mg.modules.empty() && mg.input_modules.empty()) {
      out << "modules: 0\n";
      return kOk;
    }
    int depth = 0;
    for (const auto& l : r.layouts) depth = std::max(depth, l.max_depth);
    out << "modules: " << mg.modules.size() << " calc, " << mg.input_modules.size() << " input; max depth " << depth
        << "\n";
    for (std::size_t i = 0; i < mg.modules.size(); ++i) {
      out << "module " << mg.modules[i].id << " " << mg.modules[i].name << ": " << r.layouts[i].rows.size()
          << " rows, depth " << r.layouts[i].max_depth << "\n";
    }
    for (const auto& im : mg.input_modules) out << "input module " << im.name << ": " << im.cells.size() << " cells\n";
    return kOk;
  });
}

int cmd_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Workbook wb = load_workbook_file(cfg.input_paths.at(0));
    const DependencyGraph g = build_graph(wb, cfg.empty_as_zero);
    const CellClassification cls = classify(wb, g);
    const auto terminals = terminal_cells(cls, g);
    const auto shared = shared_cells(cls, g);
    const auto cycles = find_cycles(g);
    const auto classes = replication_classes(wb);

    if (cfg.report_format == ReportFormat::Json) {
      ordered_json j;
      j["inputs"] = cls.inputs.size();
      j["calculated"] = cls.calculated.size();
      j["labels"] = cls.labels.size();
      j["terminals"] = a1_list(terminals);
      j["shared"] = a1_list(shared);
      j["cycles"] = ordered_json::array();
      for (const auto& c : cycles) j["cycles"].push_back(a1_list(c));
      j["replication_classes"] = ordered_json::array();
      for (const auto& rc : classes)
        j["replication_classes"].push_back({{"normal_form", rc.normal_form}, {"members", a1_list(rc.members)}});
      out << j.dump(2) << "\n";
      return kOk;
    }
    out << "inputs: " << cls.inputs.size() << ", calculated: " << cls.calculated.size()
        << ", terminals: " << terminals.size() << ", shared: " << shared.size() << ", cycles: " << cycles.size()
        << ", replication classes: " << classes.size() << "\n";
    out << "labels: " << cls.labels.size() << "\n";
    if (!terminals.empty()) out << "terminal cells: " << join(terminals) << "\n";
    if (!shared.empty()) out << "shared cells: " << join(shared) << "\n";
    for (const auto& c : cycles) out << "cycle: " << join(c) << "\n";
    for (const auto& rc : classes) out << "replication class " << rc.normal_form << ": " << join(rc.members) << "\n";
    return kOk;
  });
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ValueMap values = evaluate(load_workbook_file(cfg.input_paths.at(0)));
    for (const auto& [addr, v] : values) out << address_to_a1(addr) << "\t" << format_value(v) << "\n";
    return kOk;
  });
}

int cmd_diff(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Workbook a = load_workbook_file(cfg.input_paths.at(0));
    const Workbook b = load_workbook_file(cfg.input_paths.at(1));
    const ValueMap va = evaluate(a);
    const ValueMap vb = evaluate(b);
    std::map<CellAddress, CellAddress> mapping;
    if (auto tags_b = origin_tags(b); !tags_b.empty()) {
      for (const auto& [at_b, original] : tags_b) mapping[original] = at_b;
    } else if (auto tags_a = origin_tags(a); !tags_a.empty()) {
      mapping = tags_a;
    } else {
      for (const auto& [addr, _] : va) mapping[addr] = addr;
    }
    const auto diffs = value_diff(va, vb, mapping);
    for (const auto& d : diffs) {
      out << address_to_a1(d.address) << "\t" << address_to_a1(mapping.at(d.address)) << "\t"
          << format_value(d.value_a) << "\t" << format_value(d.value_b) << "\n";
    }
    return diffs.empty() ? kOk : kDifferences;
  });
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restructure flat spreadsheet models into modular, indented form"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string grouping = "single";
  std::string format = "text";

  auto* restructure = app.add_subcommand("restructure", "Write the structured workbook");
  restructure->add_option("input", cfg.input_paths, "Formula-CSV input")->required()->expected(1);
  restructure->add_option("-o,--output", cfg.output_path, "Structured formula-CSV output")->required();
  restructure->add_option("--overview", cfg.overview_path, "Module overview in DOT");
  restructure->add_option("--inputs", grouping, "Input module grouping")
      ->check(CLI::IsMember({"single", "per-consumer"}));
  restructure->add_flag("--empty-as-zero", cfg.empty_as_zero, "Treat referenced empty cells as 0");

  auto* audit = app.add_subcommand("audit", "Report dependency structure");
  audit->add_option("input", cfg.input_paths, "Formula-CSV input")->required()->expected(1);
  audit->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));

  auto* eval = app.add_subcommand("eval", "Print every cell value");
  eval->add_option("input", cfg.input_paths, "Formula-CSV input")->required()->expected(1);

  auto* diff = app.add_subcommand("diff", "Compare the values of two workbooks");
  diff->add_option("inputs", cfg.input_paths, "Two formula-CSV inputs")->required()->expected(2);

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    // Help exits 0; every usage error maps onto the input-error status.
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }
  cfg.input_grouping = grouping == "per-consumer" ? InputGrouping::PerConsumer : InputGrouping::Single;
  cfg.report_format = format == "json" ? ReportFormat::Json : ReportFormat::Text;

  if (restructure->parsed()) {
    cfg.command = Command::Restructure;
    return cmd_restructure(cfg, out, err);
  }
  if (audit->parsed()) {
    cfg.command = Command::Audit;
    return cmd_audit(cfg, out, err);
  }
  if (eval->parsed()) {
    cfg.command = Command::Eval;
    return cmd_eval(cfg, out, err);
  }
  cfg.command = Command::Diff;
  return cmd_diff(cfg, out, err);
}

}  // namespace structsheet::cli
