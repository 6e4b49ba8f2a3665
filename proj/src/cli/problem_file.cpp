#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "cqr/cli.hpp"
#include "cqr/random.hpp"

namespace cqr::cli {
namespace {

struct Token {
  std::string text;
  std::size_t line, column;
};

struct Entry {
  std::size_t line, column;  // position of the key
  std::vector<Token> tokens;
  std::string raw;  // value text for string keys
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && is_space(s[a])) ++a;
  while (b > a && is_space(s[b - 1])) --b;
  return std::string(s.substr(a, b - a));
}

void tokenize(std::string_view text, std::size_t line, std::size_t col0,
              std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (is_space(text[i]) || text[i] == ',')) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i]) && text[i] != ',') ++i;
    if (i > start) out.push_back({std::string(text.substr(start, i - start)), line, col0 + start});
  }
}

double to_number(const Token& t, const std::string& source) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.text.c_str(), &end);
  if (end != t.text.c_str() + t.text.size())
    throw ParseError(source, t.line, t.column, "not a number: '" + t.text + "'");
  if (!std::isfinite(v))
    throw ParseError(source, t.line, t.column, "value is not finite: '" + t.text + "'");
  return v;
}

const std::map<std::string, bool, std::less<>>& known_keys() {
  // key -> holds free text
  static const std::map<std::string, bool, std::less<>> keys{
      {"n", false},        {"f0", false},      {"beta", false},     {"sigma", false},
      {"g", false},        {"H", false},       {"H_layout", true},  {"W", false},
      {"W_layout", true},  {"id", true},       {"comment", true}};
  return keys;
}

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line_, std::size_t column_,
                       const std::string& message)
    : InputError(source + ":" + std::to_string(line_) + ":" + std::to_string(column_) + ": " +
                 message),
      line(line_),
      column(column_) {}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string("fnv1a64:") + buf;
}

ProblemFile parse_problem(std::string_view text, const std::string& source) {
  std::map<std::string, Entry, std::less<>> entries;
  Entry* current = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    if (trim(line).empty()) {
      if (eol == text.size()) break;
      continue;
    }
    if (is_space(line[0])) {
      if (!current) {
        std::size_t c = 0;
        while (is_space(line[c])) ++c;
        throw ParseError(source, line_no, c + 1, "continuation line without a key");
      }
      current->raw += (current->raw.empty() ? "" : " ") + trim(line);
      tokenize(line, line_no, 1, current->tokens);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(source, line_no, 1, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const auto known = known_keys().find(key);
    if (known == known_keys().end())
      throw ParseError(source, line_no, 1, "unknown key '" + key + "'");
    if (entries.count(key)) throw ParseError(source, line_no, 1, "duplicate key '" + key + "'");
    Entry& e = entries[key];
    e.line = line_no;
    e.column = 1;
    e.raw = trim(line.substr(eq + 1));
    tokenize(line.substr(eq + 1), line_no, eq + 2, e.tokens);
    current = &e;
    if (eol == text.size()) break;
  }

  auto require = [&](const char* key) -> const Entry& {
    const auto it = entries.find(key);
    if (it == entries.end())
      throw ParseError(source, line_no, 1, std::string("missing required key '") + key + "'");
    return it->second;
  };
  auto numbers = [&](const Entry& e) {
    Vector v;
    for (const Token& t : e.tokens) v.push_back(to_number(t, source));
    return v;
  };
  auto scalar = [&](const char* key, std::optional<double> fallback = std::nullopt) {
    const auto it = entries.find(key);
    if (it == entries.end() && fallback) return *fallback;
    const Entry& e = require(key);
    if (e.tokens.size() != 1)
      throw ParseError(source, e.line, e.column, std::string("'") + key + "' takes one value");
    return to_number(e.tokens[0], source);
  };

  const Entry& ne = require("n");
  const double nd = scalar("n");
  if (nd < 1 || nd != std::floor(nd) || nd > 1e6)
    throw ParseError(source, ne.tokens[0].line, ne.tokens[0].column,
                     "n must be a positive integer");
  const auto n = static_cast<std::size_t>(nd);

  const Entry& ge = require("g");
  Vector g = numbers(ge);
  if (g.size() != n)
    throw ParseError(source, ge.line, ge.column,
                     "g has " + std::to_string(g.size()) + " values, expected " + std::to_string(n));

  auto read_matrix = [&](const char* key, const char* layout_key) {
    const Entry& e = require(key);
    std::string layout = "dense";
    if (const auto it = entries.find(layout_key); it != entries.end()) layout = it->second.raw;
    const Vector v = numbers(e);
    Matrix m(n, n);
    if (layout == "dense") {
      if (v.size() != n * n)
        throw ParseError(source, e.line, e.column,
                         std::string(key) + " has " + std::to_string(v.size()) +
                             " values, expected " + std::to_string(n * n));
      m = Matrix::from_rows(n, n, v);
    } else if (layout == "upper") {
      if (v.size() != n * (n + 1) / 2)
        throw ParseError(source, e.line, e.column,
                         std::string(key) + " has " + std::to_string(v.size()) +
                             " values, expected " + std::to_string(n * (n + 1) / 2));
      std::size_t k = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          m(i, j) = v[k];
          m(j, i) = v[k++];
        }
    } else {
      const Entry& le = entries.find(layout_key)->second;
      throw ParseError(source, le.line, le.column, "layout must be 'dense' or 'upper'");
    }
    return m;
  };

  Matrix h = read_matrix("H", "H_layout");
  std::optional<Matrix> w;
  if (entries.count("W")) w = read_matrix("W", "W_layout");
  else if (entries.count("W_layout")) {
    const Entry& le = entries.find("W_layout")->second;
    throw ParseError(source, le.line, le.column, "W_layout given without W");
  }

  const double f0 = scalar("f0", 0.0);
  const double beta = scalar("beta");
  const double sigma = scalar("sigma");
  const auto at = [&](const char* key) -> const Entry& { return entries.find(key)->second; };
  try {
    ProblemFile out{CqrProblem(f0, std::move(g), std::move(h), beta, sigma, std::move(w)), {}, {},
                    digest(text)};
    if (entries.count("id")) out.id = at("id").raw;
    if (entries.count("comment")) out.comment = at("comment").raw;
    out.problem.label = out.id;
    return out;
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    const std::string msg = e.what();
    const char* key = msg.starts_with("sigma")               ? "sigma"
                      : msg.starts_with("W") && entries.count("W") ? "W"
                                                                 : "H";
    const Entry& k = at(key);
    throw ParseError(source, k.line, k.column, msg);
  }
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), path);
}

Vector parse_point(std::string_view text, const std::string& source) {
  Vector v;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    std::vector<Token> toks;
    tokenize(line, line_no, 1, toks);
    for (const Token& t : toks) v.push_back(to_number(t, source));
  }
  if (v.empty()) throw ParseError(source, 1, 1, "no coordinates found");
  return v;
}

Vector load_point(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_point(ss.str(), path);
}

std::string format_problem(const CqrProblem& p, const std::string& id,
                           const std::string& comment) {
  std::ostringstream o;
  if (!id.empty()) o << "id = " << id << "\n";
  if (!comment.empty()) o << "comment = " << comment << "\n";
  const std::size_t n = p.n();
  o << "n = " << n << "\n";
  o << "f0 = " << hex_double(p.f0()) << "\n";
  o << "beta = " << hex_double(p.beta()) << "\n";
  o << "sigma = " << hex_double(p.sigma()) << "\n";
  o << "g =";
  for (double v : p.g()) o << " " << hex_double(v);
  o << "\n";
  auto matrix = [&](const char* key, const Matrix& m) {
    o << key << " =";
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) o << "\n   ";
      for (std::size_t j = 0; j < n; ++j) o << " " << hex_double(m(i, j));
    }
    o << "\n";
  };
  matrix("H", p.H());
  if (p.W()) matrix("W", *p.W());
  return o.str();
}

CqrProblem random_problem(std::uint64_t key, std::size_t n, double beta, double sigma) {
  CounterRng rng(key);
  Vector g = rng.normal_vector(n);
  Matrix h = rng.symmetric_normal(n);
  return CqrProblem(0.0, std::move(g), std::move(h), beta, sigma);
}

}  // namespace cqr::cli
