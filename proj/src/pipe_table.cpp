#include "qmigrate/pipe_table.hpp"

#include <algorithm>

namespace qmigrate::pipe_table {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool looks_like_row(std::string_view line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\') {
      ++i;
    } else if (line[i] == '|') {
      return true;
    }
  }
  return false;
}

std::vector<std::string> split_row(std::string_view line) {
  line = trim(line);
  std::vector<std::string> cells;
  std::string current;
  bool leading_pipe = !line.empty() && line.front() == '|';
  bool ended_on_pipe = false;
  std::size_t i = leading_pipe ? 1 : 0;
  for (; i < line.size(); ++i) {
    char c = line[i];
    ended_on_pipe = false;
    if (c == '\\' && i + 1 < line.size()) {
      current += c;
      current += line[++i];
    } else if (c == '|') {
      cells.emplace_back(trim(current));
      current.clear();
      ended_on_pipe = true;
    } else {
      current += c;
    }
  }
  if (!ended_on_pipe) cells.emplace_back(trim(current));
  return cells;
}

bool is_separator_row(std::string_view line) {
  if (!looks_like_row(line)) return false;
  auto cells = split_row(line);
  if (cells.empty()) return false;
  for (const auto& cell : cells) {
    std::string_view c = cell;
    if (!c.empty() && c.front() == ':') c.remove_prefix(1);
    if (!c.empty() && c.back() == ':') c.remove_suffix(1);
    if (c.empty()) return false;
    if (!std::all_of(c.begin(), c.end(), [](char ch) { return ch == '-'; })) return false;
  }
  return true;
}

std::string unescape_cell(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\\' && i + 1 < raw.size()) {
      char next = raw[i + 1];
      if (next == '|' || next == '\\') {
        out += next;
        ++i;
        continue;
      }
      if (next == 'n') {
        out += '\n';
        ++i;
        continue;
      }
    }
    out += c;
  }
  return out;
}

std::string escape_cell(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 8);
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '|': out += "\\|"; break;
      case '\n': out += "\\n"; break;
      case '\r': break;
      default: out += c;
    }
  }
  return out;
}

std::string strip_code_fence(std::string_view text) {
  std::size_t open = 0;
  while (open < text.size() && text[open] == '`') ++open;
  if (open == 0 || text.size() < 2 * open + 1) return std::string{text};
  std::size_t close = 0;
  while (close < text.size() && text[text.size() - 1 - close] == '`') ++close;
  if (close != open) return std::string{text};
  auto inner = text.substr(open, text.size() - 2 * open);
  // An inner run of exactly `open` backticks would have closed the span.
  for (std::size_t i = 0; i < inner.size();) {
    if (inner[i] != '`') {
      ++i;
      continue;
    }
    std::size_t run = 0;
    while (i + run < inner.size() && inner[i + run] == '`') ++run;
    if (run == open) return std::string{text};
    i += run;
  }
  bool all_spaces = std::all_of(inner.begin(), inner.end(), [](char c) { return c == ' '; });
  if (!all_spaces && inner.size() >= 2 && inner.front() == ' ' && inner.back() == ' ') {
    inner = inner.substr(1, inner.size() - 2);
  }
  return std::string{inner};
}

std::string fence_code(std::string_view code) {
  std::size_t longest = 0;
  for (std::size_t i = 0; i < code.size();) {
    if (code[i] != '`') {
      ++i;
      continue;
    }
    std::size_t run = 0;
    while (i + run < code.size() && code[i + run] == '`') ++run;
    longest = std::max(longest, run);
    i += run;
  }
  std::string fence(longest + 1, '`');
  bool pad = !code.empty() && (code.front() == '`' || code.back() == '`' || code.front() == ' ' ||
                               code.back() == ' ');
  std::string out = fence;
  if (pad) out += ' ';
  out += code;
  if (pad) out += ' ';
  out += fence;
  return out;
}

std::string format_row(const std::vector<std::string>& escaped_cells) {
  std::string out = "|";
  for (const auto& cell : escaped_cells) {
    out += ' ';
    out += cell;
    out += " |";
  }
  return out;
}

std::string format_separator(std::size_t columns) {
  std::string out = "|";
  for (std::size_t i = 0; i < columns; ++i) out += "---|";
  return out;
}

std::vector<Table> find_tables(std::string_view text) {
  std::vector<Table> tables;
  auto lines = split_lines(text);
  std::size_t i = 0;
  while (i + 1 < lines.size()) {
    if (!looks_like_row(lines[i]) || is_separator_row(lines[i]) || !is_separator_row(lines[i + 1])) {
      ++i;
      continue;
    }
    auto header = split_row(lines[i]);
    if (split_row(lines[i + 1]).size() != header.size()) {
      ++i;
      continue;
    }
    Table table;
    table.header_line_no = i + 1;
    table.header = std::move(header);
    std::size_t j = i + 2;
    for (; j < lines.size() && looks_like_row(lines[j]); ++j) {
      table.rows.push_back(Row{j + 1, split_row(lines[j])});
    }
    tables.push_back(std::move(table));
    i = j;
  }
  return tables;
}

}  // namespace qmigrate::pipe_table
