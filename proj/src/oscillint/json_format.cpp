#include "oscillint/json_format.hpp"

#include <cmath>
#include <cstdio>

namespace oscillint {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

using J = nlohmann::ordered_json;

bool scalar(const J& j) { return !j.is_array() && !j.is_object(); }

void emit(const J& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case J::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_real(v) : "\"" + format_real(v) + "\"";
      return;
    }
    case J::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && scalar(e);
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) out += "\n" + pad;
        emit(e, indent, depth + 1, out);
        first = false;
      }
      if (!flat) out += "\n" + close;
      out += ']';
      return;
    }
    case J::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        out += "\n" + pad + J(k).dump() + ": ";
        emit(v, indent, depth + 1, out);
        first = false;
      }
      out += "\n" + close + '}';
      return;
    }
    default: out += j.dump(); return;
  }
}

}  // namespace

std::string format_json(const nlohmann::ordered_json& doc, int indent) {
  std::string out;
  emit(doc, indent, 0, out);
  out += '\n';
  return out;
}

}  // namespace oscillint
