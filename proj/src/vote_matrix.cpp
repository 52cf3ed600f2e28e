#include "unfold/vote_matrix.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "unfold/errors.hpp"

namespace unfold {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> read_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur)) {
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

int parse_term(const std::string& s, long row, long col) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw parse_error("term label is not an integer: '" + s + "'", row, col);
  }
  return value;
}

}  // namespace

bool VoteMatrix::has_terms() const {
  if (votes.empty()) return false;
  for (const auto& v : votes) {
    if (!v.term.has_value()) return false;
  }
  return true;
}

void VoteMatrix::validate() const {
  if (cells.rows() != static_cast<Eigen::Index>(legislators.size()) ||
      cells.cols() != static_cast<Eigen::Index>(votes.size())) {
    throw validation_error("VoteMatrix: cell block does not match metadata dimensions");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : legislators) {
    if (!seen.insert(l.id).second) {
      throw validation_error("VoteMatrix: duplicate legislator id '" + l.id + "'");
    }
  }
  seen.clear();
  for (const auto& v : votes) {
    if (!seen.insert(v.id).second) {
      throw validation_error("VoteMatrix: duplicate vote id '" + v.id + "'");
    }
  }
}

int VoteMatrix::index_of_legislator(const std::string& id) const {
  for (std::size_t i = 0; i < legislators.size(); ++i) {
    if (legislators[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int VoteMatrix::index_of_vote(const std::string& id) const {
  for (std::size_t j = 0; j < votes.size(); ++j) {
    if (votes[j].id == id) return static_cast<int>(j);
  }
  return -1;
}

VoteMatrix parse_vote_matrix_csv(const std::string& text) {
  const auto lines = read_lines(text);
  if (lines.empty()) throw parse_error("empty vote file", 1, 1);

  const auto header = split_line(lines[0]);
  if (header.size() < 3 || header[0] != "legislator" || header[1] != "party") {
    throw parse_error("header must start with 'legislator,party' and list vote ids", 1, 1);
  }
  const std::size_t ncols = header.size();
  const std::size_t nvotes = ncols - 2;

  VoteMatrix m;
  m.votes.resize(nvotes);
  for (std::size_t j = 0; j < nvotes; ++j) m.votes[j].id = header[j + 2];

  std::size_t body_start = 1;
  if (lines.size() > 1) {
    const auto second = split_line(lines[1]);
    if (!second.empty() && second[0] == "term") {
      if (second.size() != ncols) {
        throw parse_error("term row has wrong field count", 2, second.size());
      }
      for (std::size_t j = 0; j < nvotes; ++j) {
        m.votes[j].term = parse_term(second[j + 2], 2, static_cast<long>(j + 3));
      }
      body_start = 2;
    }
  }

  const std::size_t nrows = lines.size() - body_start;
  m.legislators.resize(nrows);
  m.cells.resize(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(nvotes));
  for (std::size_t r = 0; r < nrows; ++r) {
    const long file_row = static_cast<long>(body_start + r + 1);
    const auto fields = split_line(lines[body_start + r]);
    if (fields.size() != ncols) {
      throw parse_error("expected " + std::to_string(ncols) + " fields, found " +
                            std::to_string(fields.size()),
                        file_row, static_cast<long>(fields.size()));
    }
    m.legislators[r].id = fields[0];
    m.legislators[r].party = fields[1];
    for (std::size_t j = 0; j < nvotes; ++j) {
      const std::string& cell = fields[j + 2];
      Vote v;
      if (cell == "1") {
        v = Vote::Yea;
      } else if (cell == "0") {
        v = Vote::Nay;
      } else if (cell == "NA") {
        v = Vote::Missing;
      } else {
        throw parse_error("cell must be 1, 0 or NA, found '" + cell + "'", file_row,
                          static_cast<long>(j + 3));
      }
      m.set(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j), v);
    }
  }
  m.validate();
  for (auto& l : m.legislators) {
    bool any = false;
    const Eigen::Index i = static_cast<Eigen::Index>(&l - m.legislators.data());
    for (Eigen::Index j = 0; j < m.cols(); ++j) any = any || m.observed(i, j);
    l.anchor_eligible = any;
  }
  return m;
}

VoteMatrix load_vote_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open vote file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_vote_matrix_csv(buf.str());
}

std::string to_csv(const VoteMatrix& m) {
  std::string out = "legislator,party";
  for (const auto& v : m.votes) out += "," + v.id;
  out += "\n";
  if (m.has_terms()) {
    out += "term,";
    for (const auto& v : m.votes) out += "," + std::to_string(*v.term);
    out += "\n";
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += m.legislators[i].id + "," + m.legislators[i].party;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      switch (m.at(i, j)) {
        case Vote::Yea: out += ",1"; break;
        case Vote::Nay: out += ",0"; break;
        case Vote::Missing: out += ",NA"; break;
      }
    }
    out += "\n";
  }
  return out;
}

void save_vote_matrix(const VoteMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write vote file: " + path);
  out << to_csv(m);
}

std::string fingerprint(const VoteMatrix& m) {
  const std::string canon = to_csv(m);
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace unfold
