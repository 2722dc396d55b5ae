#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "crnlap/crn.hpp"
#include "crnlap/error.hpp"

namespace crnlap {

namespace {

// Species name -> count; std::map gives a canonical key for deduplication.
using ComplexKey = std::map<std::string, long long>;

bool is_identifier_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_identifier_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  char peek() {
    skip_space();
    return pos_ < line_.size() ? line_[pos_] : '\0';
  }
  bool consume(std::string_view token) {
    skip_space();
    if (line_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  std::size_t column() const { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_no_, column());
  }
  [[noreturn]] void fail_at(const std::string& message, std::size_t column) const {
    throw ParseError(message, line_no_, column);
  }

  // Reads a maximal run of characters that may belong to a number.
  std::string_view number_token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size()) {
      const char c = line_[pos_];
      const bool exponent_sign =
          (c == '+' || c == '-') && pos_ > start && (line_[pos_ - 1] == 'e' || line_[pos_ - 1] == 'E');
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
          exponent_sign || (pos_ == start && (c == '-' || c == '+'))) {
        ++pos_;
      } else {
        break;
      }
    }
    return line_.substr(start, pos_ - start);
  }

  std::string identifier() {
    skip_space();
    if (pos_ >= line_.size() || !is_identifier_start(line_[pos_])) fail("expected a species name");
    const std::size_t start = pos_;
    while (pos_ < line_.size() && is_identifier_char(line_[pos_])) ++pos_;
    return std::string(line_.substr(start, pos_ - start));
  }

  // Appends species names to `appearance` in textual order.
  ComplexKey complex(std::vector<std::string>& appearance) {
    skip_space();
    ComplexKey key;
    if (peek() == '0') {
      const std::size_t start = column();
      std::string_view token = number_token();
      if (token == "0" && (at_end() || peek() == '-' || peek() == '<' || peek() == ';')) return key;
      fail_at("invalid coefficient '" + std::string(token) + "'", start);
    }
    while (true) {
      long long coefficient = 1;
      skip_space();
      if (pos_ < line_.size() && !is_identifier_start(line_[pos_])) {
        const std::size_t start = column();
        const std::string_view token = number_token();
        long long parsed = 0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), parsed);
        if (token.empty()) fail("expected a species term");
        if (ec != std::errc() || end != token.data() + token.size() || parsed <= 0) {
          fail_at("invalid coefficient '" + std::string(token) +
                      "' (expected a positive integer)",
                  start);
        }
        coefficient = parsed;
      }
      std::string name = identifier();
      appearance.push_back(name);
      key[name] += coefficient;
      if (!consume("+")) break;
    }
    return key;
  }

  double rate() {
    const std::size_t start = column();
    const std::string_view token = number_token();
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
      fail_at("invalid rate constant '" + std::string(token) + "'", start);
    }
    if (!std::isfinite(value) || value <= 0.0) {
      fail_at("rate constant must be strictly positive, got '" + std::string(token) + "'", start);
    }
    return value;
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

std::string key_label(const ComplexKey& key, const std::vector<std::string>& species_order) {
  std::string label;
  for (const auto& name : species_order) {
    const auto it = key.find(name);
    if (it == key.end()) continue;
    if (!label.empty()) label += " + ";
    if (it->second != 1) label += std::to_string(it->second) + " ";
    label += name;
  }
  return label.empty() ? "0" : label;
}

std::pair<std::size_t, std::size_t> line_column_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

CrnSystem parse_crn(std::string_view text, std::vector<std::string>* warnings) {
  std::vector<std::string> species;
  std::map<std::string, std::size_t> species_index;
  std::vector<ComplexKey> complexes;
  std::map<ComplexKey, std::size_t> complex_index;
  std::vector<Edge> edges;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> first_line_of_pair;

  auto intern_species = [&](const std::vector<std::string>& appearance) {
    for (const auto& name : appearance) {
      if (!species_index.contains(name)) {
        species_index.emplace(name, species.size());
        species.push_back(name);
      }
    }
  };
  auto intern_complex = [&](const ComplexKey& key) {
    auto [it, inserted] = complex_index.emplace(key, complexes.size());
    if (inserted) complexes.push_back(key);
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t stop = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, stop - start);
    start = stop + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    LineScanner scan(line, line_no);
    if (scan.at_end()) continue;

    std::vector<std::string> appearance;
    const ComplexKey lhs = scan.complex(appearance);
    bool reversible = false;
    if (scan.consume("<->")) {
      reversible = true;
    } else if (!scan.consume("->")) {
      scan.fail("expected '->' or '<->'");
    }
    scan.skip_space();
    const std::size_t rhs_column = scan.column();
    const ComplexKey rhs = scan.complex(appearance);
    if (!scan.consume(";")) scan.fail("expected ';' before the rate constant");
    if (!scan.consume("k") || !scan.consume("=")) scan.fail("expected 'k='");
    const double forward = scan.rate();
    double backward = 0.0;
    if (reversible) {
      if (!scan.consume(",")) scan.fail("reversible reaction needs two rate constants 'k=kf, kr'");
      backward = scan.rate();
    }
    if (!scan.at_end()) scan.fail("unexpected trailing input");
    if (lhs == rhs) scan.fail_at("reactant and product complexes are identical", rhs_column);

    intern_species(appearance);
    const std::size_t tail = intern_complex(lhs);
    const std::size_t head = intern_complex(rhs);
    auto add_edge = [&](std::size_t from, std::size_t to, double k) {
      const auto [it, inserted] = first_line_of_pair.emplace(std::pair{from, to}, line_no);
      if (!inserted && warnings != nullptr) {
        warnings->push_back("line " + std::to_string(line_no) + ": reaction repeats line " +
                            std::to_string(it->second) + "; kept as a parallel edge");
      }
      edges.push_back({from, to, k});
    };
    add_edge(tail, head, forward);
    if (reversible) add_edge(head, tail, backward);
  }

  if (edges.empty()) throw ParseError("network contains no reactions", line_no, 1);

  Eigen::MatrixXd stoich = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(species.size()),
                                                 static_cast<Eigen::Index>(complexes.size()));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < complexes.size(); ++i) {
    for (const auto& [name, count] : complexes[i]) {
      stoich(static_cast<Eigen::Index>(species_index.at(name)), static_cast<Eigen::Index>(i)) =
          static_cast<double>(count);
    }
    labels.push_back(key_label(complexes[i], species));
  }
  return CrnSystem(std::move(species), std::move(stoich), DiGraph(complexes.size(), std::move(edges)),
                   std::move(labels));
}

CrnSystem parse_json_network(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column_of(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(std::string("invalid JSON: ") + e.what(), line, column);
  }

  try {
    const auto species = doc.at("species").get<std::vector<std::string>>();
    const auto columns = doc.at("S").get<std::vector<std::vector<double>>>();
    Eigen::MatrixXd stoich(static_cast<Eigen::Index>(species.size()),
                           static_cast<Eigen::Index>(columns.size()));
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i].size() != species.size()) {
        throw ParseError("column " + std::to_string(i) + " of S has " +
                             std::to_string(columns[i].size()) + " entries, expected " +
                             std::to_string(species.size()),
                         1, 1);
      }
      for (std::size_t j = 0; j < species.size(); ++j) {
        stoich(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = columns[i][j];
      }
    }

    std::vector<Edge> edges;
    for (const auto& entry : doc.at("edges")) {
      if (!entry.is_array() || entry.size() != 3) {
        throw ParseError("each edge must be [tail, head, k]", 1, 1);
      }
      edges.push_back({entry[0].get<std::size_t>(), entry[1].get<std::size_t>(), entry[2].get<double>()});
    }
    std::vector<std::string> labels;
    if (doc.contains("complexes")) labels = doc.at("complexes").get<std::vector<std::string>>();

    return CrnSystem(species, std::move(stoich), DiGraph(columns.size(), std::move(edges)),
                     std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed network document: ") + e.what(), 1, 1);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

CrnSystem parse_network(std::string_view text, std::vector<std::string>* warnings) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json_network(text);
  try {
    return parse_crn(text, warnings);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 1, 1);
  }
}

CrnSystem load_network(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0, 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str(), warnings);
}

}  // namespace crnlap
