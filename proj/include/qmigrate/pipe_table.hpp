#pragma once

// Pipe-delimited table dialect shared by taxonomy files, ground-truth
// sidecars and model responses.
//
//   | a | b \| c | `code` |
//   |---|--------|--------|
//
// Inside a cell, `\|` is a literal pipe, `\n` a line break and `\\` a
// backslash. Any other backslash sequence is kept verbatim.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qmigrate::pipe_table {

std::string_view trim(std::string_view text);

/// Splits on '\n'. A trailing '\r' is removed from each line. A final
/// newline does not produce an extra empty line.
std::vector<std::string_view> split_lines(std::string_view text);

/// True when the line contains at least one unescaped pipe.
bool looks_like_row(std::string_view line);

/// Splits a row on unescaped pipes. Outer pipes are optional. Cells are
/// trimmed but still escaped.
std::vector<std::string> split_row(std::string_view line);

bool is_separator_row(std::string_view line);

std::string unescape_cell(std::string_view raw);
std::string escape_cell(std::string_view text);

/// Removes one enclosing backtick code span (any fence length). A single
/// padding space on both sides is dropped, as in CommonMark.
std::string strip_code_fence(std::string_view text);

/// Wraps code in a backtick span that strip_code_fence inverts exactly.
std::string fence_code(std::string_view code);

std::string format_row(const std::vector<std::string>& escaped_cells);
std::string format_separator(std::size_t columns);

struct Row {
  std::size_t line_no = 0;  // 1-based line in the source text
  std::vector<std::string> cells;
};

struct Table {
  std::size_t header_line_no = 0;
  std::vector<std::string> header;
  std::vector<Row> rows;
};

/// Every table in document order. A table starts at a row immediately
/// followed by a separator row with the same column count, and extends over
/// the following lines that contain a pipe.
std::vector<Table> find_tables(std::string_view text);

}  // namespace qmigrate::pipe_table
