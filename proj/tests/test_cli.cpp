#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "structsheet/cli.hpp"
#include "structsheet/evaluator.hpp"
#include "support.hpp"

using namespace structsheet;
using testing_support::fixture_path;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "structsheet");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("structsheet_cli_" + name)).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

}  // namespace

TEST_CASE("audit text report") {
  const Outcome o = run({"audit", fixture_path("profit_and_loss.fcsv")});
  CHECK(o.code == cli::kOk);
  CHECK(o.out ==
        "inputs: 17, calculated: 8, terminals: 1, shared: 0, cycles: 0, replication classes: 0\n"
        "labels: 32\n"
        "terminal cells: C31\n");

  const Outcome shared = run({"audit", fixture_path("shared_subtotal.fcsv")});
  CHECK(shared.out.rfind("inputs: 3, calculated: 4, terminals: 1, shared: 1, cycles: 0, replication classes: 1\n", 0) == 0);
  CHECK(shared.out.find("shared cells: B3\n") != std::string::npos);
}

TEST_CASE("audit reports cycles without failing") {
  const Outcome o = run({"audit", fixture_path("cycle.fcsv")});
  CHECK(o.code == cli::kOk);
  CHECK(o.out.find("cycles: 1") != std::string::npos);
  CHECK(o.out.find("cycle: A1 B1\n") != std::string::npos);
}

TEST_CASE("audit json report") {
  const Outcome o = run({"audit", fixture_path("shared_subtotal.fcsv"), "--format", "json"});
  CHECK(o.code == cli::kOk);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["inputs"] == 3);
  CHECK(j["calculated"] == 4);
  CHECK(j["terminals"] == nlohmann::json::array({"B7"}));
  CHECK(j["shared"] == nlohmann::json::array({"B3"}));
  CHECK(j["cycles"].empty());
  CHECK(j["replication_classes"].size() == 1);
}

TEST_CASE("restructure writes the workbook and overview") {
  const std::string out = temp_path("pl.fcsv");
  const std::string dot = temp_path("pl.dot");
  const Outcome o = run({"restructure", fixture_path("profit_and_loss.fcsv"), "-o", out, "--overview", dot});
  CHECK(o.code == cli::kOk);
  CHECK(o.out.rfind("modules: 1 calc, 1 input; max depth 7\n", 0) == 0);
  const Workbook placed = load_workbook_file(out);
  CHECK(evaluate(placed).at(testing_support::A("B2")) == 24219);
  CHECK(testing_support::read_file(dot).rfind("digraph G {\n", 0) == 0);

  const Outcome d = run({"diff", fixture_path("profit_and_loss.fcsv"), out});
  CHECK(d.code == cli::kOk);
  CHECK(d.out.empty());
  const Outcome reversed = run({"diff", out, fixture_path("profit_and_loss.fcsv")});
  CHECK(reversed.code == cli::kOk);
}

TEST_CASE("restructure exit codes") {
  const std::string out = temp_path("x.fcsv");
  const Outcome cyc = run({"restructure", fixture_path("cycle.fcsv"), "-o", out});
  CHECK(cyc.code == cli::kCycle);
  CHECK(cyc.err.find("A1") != std::string::npos);
  CHECK(cyc.err.find("B1") != std::string::npos);

  const Outcome empty = run({"restructure", fixture_path("empty.fcsv"), "-o", out});
  CHECK(empty.code == cli::kOk);
  CHECK(empty.out == "modules: 0\n");
  CHECK(testing_support::read_file(out).empty());

  const std::string bad = temp_path("bad.fcsv");
  write_file(bad, "=1+\n");
  CHECK(run({"restructure", bad, "-o", out}).code == cli::kInputError);
  write_file(bad, ",=A1\n");
  CHECK(run({"restructure", bad, "-o", out}).code == cli::kInputError);
  CHECK(run({"restructure", temp_path("missing.fcsv"), "-o", out}).code == cli::kInputError);
  CHECK(run({"restructure", fixture_path("empty.fcsv")}).code == cli::kInputError);
  CHECK(run({}).code == cli::kInputError);
}

TEST_CASE("eval and diff") {
  const Outcome e = run({"eval", fixture_path("profit_and_loss.fcsv")});
  CHECK(e.code == cli::kOk);
  CHECK(e.out.find("C31\t24219\n") != std::string::npos);
  CHECK(e.out.rfind("C4\t135486\n", 0) == 0);
  CHECK(run({"eval", fixture_path("cycle.fcsv")}).code == cli::kCycle);

  CHECK(run({"diff", fixture_path("shared_subtotal.fcsv"), fixture_path("shared_subtotal.fcsv")}).out.empty());
  const std::string changed = temp_path("changed.fcsv");
  std::string text = testing_support::read_file(fixture_path("shared_subtotal.fcsv"));
  text.replace(text.find("4"), 1, "5");
  write_file(changed, text);
  const Outcome d = run({"diff", fixture_path("shared_subtotal.fcsv"), changed});
  CHECK(d.code == cli::kDifferences);
  CHECK(d.out.rfind("B1\tB1\t4\t5\n", 0) == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
  for (const char* name : {"profit_and_loss.fcsv", "shared_subtotal.fcsv", "selection.fcsv"}) {
    std::string first_out, first_dot, first_report;
    for (int i = 0; i < 2; ++i) {
      const std::string out = temp_path(std::to_string(i) + name);
      const std::string dot = out + ".dot";
      const Outcome o = run({"restructure", fixture_path(name), "-o", out, "--overview", dot, "--inputs", "per-consumer"});
      REQUIRE(o.code == cli::kOk);
      const std::string report = o.out + run({"audit", fixture_path(name), "--format", "json"}).out;
      if (i == 0) {
        first_out = testing_support::read_file(out);
        first_dot = testing_support::read_file(dot);
        first_report = report;
      } else {
        CHECK(testing_support::read_file(out) == first_out);
        CHECK(testing_support::read_file(dot) == first_dot);
        CHECK(report == first_report);
      }
    }
  }
}
