#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "globular/error.hpp"

namespace globular {

// A table of dimensions: an odd-length sequence (n1, ..., nk) of natural
// numbers where every even position (1-based) is a strict local minimum:
// n1 > n2 < n3 > n4 < n5 ...  Tables index the pasting shapes the library
// works with; a singleton (n) stands for the n-disc shape.
using Table = std::vector<int>;

// Positions in diagnostics are 1-based, matching the written form (n1,...,nk).
inline void validate_table(const Table& t) {
  require(!t.empty(), ErrorKind::MalformedTable, "table must be non-empty");
  require(t.size() % 2 == 1, ErrorKind::MalformedTable,
          "table must have odd length, got length " + std::to_string(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(t[i] >= 0, ErrorKind::MalformedTable,
            "negative entry at index " + std::to_string(i + 1));
  }
  for (std::size_t i = 1; i + 1 < t.size(); i += 2) {
    if (!(t[i] < t[i - 1] && t[i] < t[i + 1])) {
      fail(ErrorKind::MalformedTable,
           "entry at index " + std::to_string(i + 1) +
               " must be a strict local minimum; got " + std::to_string(t[i]));
    }
  }
}

inline bool is_valid_table(const Table& t) {
  try {
    validate_table(t);
    return true;
  } catch (const Error&) {
    return false;
  }
}

inline int table_dim(const Table& t) { return *std::max_element(t.begin(), t.end()); }

inline std::size_t table_segments(const Table& t) { return t.size() / 2 + 1; }

inline std::string table_to_string(const Table& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(t[i]);
  }
  out += ")";
  return out;
}

// Parses the literal form "(n1,n2,...)"; whitespace around entries is allowed.
inline Table parse_table(const std::string& text) {
  std::size_t a = text.find_first_not_of(" \t");
  std::size_t b = text.find_last_not_of(" \t");
  require(a != std::string::npos, ErrorKind::MalformedInput, "empty table literal");
  std::string s = text.substr(a, b - a + 1);
  require(s.size() >= 3 && s.front() == '(' && s.back() == ')', ErrorKind::MalformedInput,
          "table literal must look like (n1,n2,...): got '" + text + "'");
  Table t;
  std::string body = s.substr(1, s.size() - 2);
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t x = item.find_first_not_of(" \t");
    std::size_t y = item.find_last_not_of(" \t");
    require(x != std::string::npos, ErrorKind::MalformedInput,
            "empty entry in table literal '" + text + "'");
    item = item.substr(x, y - x + 1);
    require(item.find_first_not_of("0123456789") == std::string::npos,
            ErrorKind::MalformedInput, "non-numeric entry '" + item + "' in table literal");
    t.push_back(std::stoi(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  validate_table(t);
  return t;
}

// All valid tables with at most max_len entries and entries bounded by max_dim,
// ordered by length, then lexicographically.  Used by test batteries and the
// contractibility certifier.
inline std::vector<Table> all_tables(int max_len, int max_dim) {
  std::vector<Table> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self) -> void {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) + 2 > max_len) return;
    // extend by an (even, odd) pair of entries
    for (int m = 0; m < cur.back(); ++m) {
      for (int n = m + 1; n <= max_dim; ++n) {
        cur.push_back(m);
        cur.push_back(n);
        self(self);
        cur.pop_back();
        cur.pop_back();
      }
    }
  };
  for (int n = 0; n <= max_dim; ++n) {
    cur = {n};
    rec(rec);
  }
  std::sort(out.begin(), out.end(), [](const Table& a, const Table& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

}  // namespace globular
