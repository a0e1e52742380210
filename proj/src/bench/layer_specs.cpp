#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

#include "isconv/bench.hpp"
#include "isconv/errors.hpp"

namespace isconv::bench {

namespace {

constexpr std::array<std::string_view, 10> kFields = {"name", "C", "H", "W", "K",
                                                      "R",    "S", "P", "T", "sparsity"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_int(std::string_view text, std::size_t line, std::string_view field) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, std::string(field), "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view text, std::size_t line, std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, std::string(field), "expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

void LayerSpec::validate() const {
  params.validate();
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
    throw ValidationError("sparsity must be in [0, 1], got " + std::to_string(sparsity));
  }
}

std::vector<LayerSpec> parse_layer_specs(std::istream& in) {
  std::vector<LayerSpec> specs;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_header = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    line = trim(line);
    if (line.empty()) continue;

    if (!seen_header) {
      if (line != kLayerSpecHeader) {
        throw ParseError(line_no, "header", "expected '" + std::string(kLayerSpecHeader) + "'");
      }
      seen_header = true;
      continue;
    }

    const auto fields = split(line);
    if (fields.size() < kFields.size()) {
      throw ParseError(line_no, std::string(kFields[fields.size()]), "missing field");
    }
    if (fields.size() > kFields.size()) {
      throw ParseError(line_no, "sparsity", "unexpected trailing fields");
    }
    if (fields[0].empty()) throw ParseError(line_no, "name", "empty layer name");

    LayerSpec spec;
    spec.name = std::string(fields[0]);
    spec.params.C = parse_int(fields[1], line_no, kFields[1]);
    spec.params.H_in = parse_int(fields[2], line_no, kFields[2]);
    spec.params.W_in = parse_int(fields[3], line_no, kFields[3]);
    spec.params.K = parse_int(fields[4], line_no, kFields[4]);
    spec.params.R = parse_int(fields[5], line_no, kFields[5]);
    spec.params.S = parse_int(fields[6], line_no, kFields[6]);
    spec.params.P = parse_int(fields[7], line_no, kFields[7]);
    spec.params.T = parse_int(fields[8], line_no, kFields[8]);
    spec.sparsity = parse_double(fields[9], line_no, kFields[9]);

    try {
      spec.validate();
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + " (" + spec.name + "): " + e.what());
    }
    specs.push_back(std::move(spec));
  }
  if (!seen_header) throw ParseError(line_no == 0 ? 1 : line_no, "header", "missing header line");
  return specs;
}

std::vector<LayerSpec> parse_layer_specs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_layer_specs(in);
}

}  // namespace isconv::bench
