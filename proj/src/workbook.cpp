#include "structsheet/workbook.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "structsheet/errors.hpp"

namespace structsheet {

Formula Formula::from_source(std::string source) {
  auto ast = std::make_shared<const FormulaAst>(parse_formula(source));
  return Formula{std::move(source), std::move(ast)};
}

Formula Formula::from_ast(FormulaAst ast) {
  std::string source = print_formula(ast);
  return Formula{std::move(source), std::make_shared<const FormulaAst>(std::move(ast))};
}

void Workbook::set(CellAddress addr, CellContent content) {
  if (!in_bounds(addr)) throw AddressError("cell out of bounds: column " + std::to_string(addr.column) +
                                           ", row " + std::to_string(addr.row));
  if (std::holds_alternative<Empty>(content)) {
    cells_.erase(addr);
    return;
  }
  cells_.insert_or_assign(addr, std::move(content));
}

const CellContent& Workbook::get(CellAddress addr) const {
  static const CellContent kEmpty = Empty{};
  auto it = cells_.find(addr);
  return it == cells_.end() ? kEmpty : it->second;
}

std::optional<std::string> Workbook::nearest_label_left(CellAddress addr) const {
  std::optional<std::string> found;
  for (auto it = cells_.lower_bound(CellAddress{1, addr.row}); it != cells_.end() && it->first < addr; ++it) {
    if (const auto* l = std::get_if<Label>(&it->second)) found = l->text;
  }
  return found;
}

std::optional<double> parse_decimal(std::string_view text) {
  std::size_t i = 0;
  std::string digits;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    if (text[i] == '-') digits += '-';
    ++i;
  }
  const std::size_t int_start = i;
  std::size_t group = 0;
  bool grouped = false;
  bool first_group = true;
  std::size_t first_group_len = 0;
  for (; i < text.size() && text[i] != '.'; ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      ++group;
    } else if (c == ',') {
      if (group == 0) return std::nullopt;
      if (first_group) {
        first_group_len = group;
        first_group = false;
      } else if (group != 3) {
        return std::nullopt;
      }
      grouped = true;
      group = 0;
    } else {
      return std::nullopt;
    }
  }
  if (grouped && (group != 3 || first_group_len > 3)) return std::nullopt;
  const bool has_int = i > int_start;
  bool has_frac = false;
  if (i < text.size() && text[i] == '.') {
    digits += '.';
    ++i;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
      digits += text[i];
      has_frac = true;
    }
  }
  if (!has_int && !has_frac) return std::nullopt;
  if (!has_int) digits.insert(digits.find('.'), "0");
  double v = 0;
  auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) return std::nullopt;
  return v;
}

namespace {

struct Field {
  std::string text;
  std::size_t line;
};

// Returns records of fields. A final LF does not open an extra record.
std::vector<std::vector<Field>> read_records(std::string_view data) {
  std::vector<std::vector<Field>> records;
  if (data.empty()) return records;
  std::vector<Field> record;
  std::string field;
  std::size_t line = 1;
  std::size_t field_line = 1;
  std::size_t i = 0;
  bool quoted = false;
  bool after_quote = false;
  auto end_field = [&] {
    record.push_back(Field{std::move(field), field_line});
    field.clear();
    quoted = false;
    after_quote = false;
    field_line = line;
  };
  while (i < data.size()) {
    const char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        after_quote = true;
        ++i;
        continue;
      }
      if (c == '\n') ++line;
      field += c;
      ++i;
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
      continue;
    }
    if (c == '\r' || c == '\n') {
      end_field();
      records.push_back(std::move(record));
      record.clear();
      if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') ++i;
      ++i;
      ++line;
      field_line = line;
      continue;
    }
    if (after_quote) throw CsvError(line, "unexpected character after closing quote");
    if (c == '"') {
      if (!field.empty()) throw CsvError(line, "quote inside unquoted field");
      quoted = true;
      ++i;
      continue;
    }
    field += c;
    ++i;
  }
  if (quoted) throw CsvError(field_line, "unbalanced quotes");
  const bool ended_with_newline = data.back() == '\n' || data.back() == '\r';
  if (!ended_with_newline) {
    end_field();
    records.push_back(std::move(record));
  }
  return records;
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

void write_field(std::ostream& out, std::string_view s) {
  if (!needs_quotes(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

Workbook load_workbook_text(std::string_view text, std::string origin_name) {
  Workbook wb(std::move(origin_name));
  const auto records = read_records(text);
  if (records.size() > kMaxRow) throw AddressError("too many rows: " + std::to_string(records.size()));
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& record = records[r];
    if (record.size() > kMaxColumn) throw AddressError("too many columns in row " + std::to_string(r + 1));
    for (std::size_t c = 0; c < record.size(); ++c) {
      const std::string& f = record[c].text;
      if (f.empty()) continue;
      const CellAddress addr{static_cast<std::uint32_t>(c + 1), static_cast<std::uint32_t>(r + 1)};
      if (f.front() == '=') {
        try {
          wb.set(addr, Formula::from_source(f));
        } catch (const FormulaError& e) {
          throw LoadError(addr, e.offset(), e.what());
        }
      } else if (auto v = parse_decimal(f)) {
        wb.set(addr, Number{*v});
      } else {
        wb.set(addr, Label{f});
      }
    }
  }
  return wb;
}

Workbook load_workbook(std::istream& in, std::string origin_name) {
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_workbook_text(data, std::move(origin_name));
}

Workbook load_workbook_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return load_workbook(in, path);
}

void save_workbook(const Workbook& wb, std::ostream& out) {
  std::uint32_t row = 1;
  std::uint32_t last_column = 0;
  for (const auto& [addr, content] : wb) {
    while (row < addr.row) {
      out << '\n';
      ++row;
      last_column = 0;
    }
    const std::uint32_t commas = last_column == 0 ? addr.column - 1 : addr.column - last_column;
    for (std::uint32_t i = 0; i < commas; ++i) out << ',';
    last_column = addr.column;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Label>) write_field(out, v.text);
          if constexpr (std::is_same_v<T, Number>) out << format_number(v.value);
          if constexpr (std::is_same_v<T, Formula>) write_field(out, v.source);
        },
        content);
  }
  if (!wb.empty()) out << '\n';
  if (!out) throw Error("write failed");
}

std::string save_workbook_text(const Workbook& wb) {
  std::ostringstream out;
  save_workbook(wb, out);
  return out.str();
}

}  // namespace structsheet
