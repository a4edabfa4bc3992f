#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "structsheet/address.hpp"

namespace structsheet {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AddressError : public Error {
 public:
  using Error::Error;
};

// Malformed CSV structure; line is 1-based.
class CsvError : public Error {
 public:
  CsvError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Formula syntax or validation failure; offset is 0-based into the formula text.
class FormulaError : public Error {
 public:
  FormulaError(std::size_t offset, const std::string& what)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset), detail_(what) {}
  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

// Workbook ingestion failure tied to a cell.
class LoadError : public Error {
 public:
  LoadError(CellAddress cell, std::size_t offset, const std::string& what)
      : Error(address_to_a1(cell) + ": " + what), cell_(cell), offset_(offset) {}
  CellAddress cell() const noexcept { return cell_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  CellAddress cell_;
  std::size_t offset_;
};

enum class ReferenceProblem { Dangling, Label };

class ReferenceError : public Error {
 public:
  ReferenceError(ReferenceProblem problem, CellAddress referencing, CellAddress referenced)
      : Error(address_to_a1(referencing) +
              (problem == ReferenceProblem::Dangling ? " references empty cell " : " references label cell ") +
              address_to_a1(referenced)),
        problem_(problem),
        referencing_(referencing),
        referenced_(referenced) {}
  ReferenceProblem problem() const noexcept { return problem_; }
  CellAddress referencing() const noexcept { return referencing_; }
  CellAddress referenced() const noexcept { return referenced_; }

 private:
  ReferenceProblem problem_;
  CellAddress referencing_;
  CellAddress referenced_;
};

class CycleError : public Error {
 public:
  explicit CycleError(std::vector<CellAddress> cells)
      : Error(describe(cells)), cells_(std::move(cells)) {}
  const std::vector<CellAddress>& cells() const noexcept { return cells_; }

 private:
  static std::string describe(const std::vector<CellAddress>& cells) {
    std::string s = "cyclic dependency:";
    for (auto c : cells) s += " " + address_to_a1(c);
    return s;
  }
  std::vector<CellAddress> cells_;
};

class EvalError : public Error {
 public:
  EvalError(CellAddress cell, const std::string& what)
      : Error(address_to_a1(cell) + ": " + what), cell_(cell) {}
  CellAddress cell() const noexcept { return cell_; }

 private:
  CellAddress cell_;
};

class UnmappedAddressError : public Error {
 public:
  explicit UnmappedAddressError(CellAddress cell)
      : Error("unmapped address " + address_to_a1(cell)), cell_(cell) {}
  CellAddress cell() const noexcept { return cell_; }

 private:
  CellAddress cell_;
};

}  // namespace structsheet
