#include "counselforge/synthgen/prompt_template.hpp"

#include "counselforge/synthgen/errors.hpp"

namespace counselforge::synthgen {

std::string render_template(std::string_view tmpl, const TemplateValues& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (true) {
    auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    auto close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) throw TemplateError("unterminated placeholder");
    out.append(tmpl.substr(pos, open - pos));
    const auto name = tmpl.substr(open + 2, close - open - 2);
    auto it = values.find(name);
    if (it == values.end()) throw TemplateError("no value for placeholder {{" + std::string(name) + "}}");
    out += it->second;
    pos = close + 2;
  }
  return out;
}

std::set<std::string> placeholders(std::string_view tmpl) {
  std::set<std::string> names;
  std::size_t pos = 0;
  while (true) {
    auto open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    auto close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    names.emplace(tmpl.substr(open + 2, close - open - 2));
    pos = close + 2;
  }
  return names;
}

}  // namespace counselforge::synthgen
