#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace counselforge::synthgen {

using TemplateValues = std::map<std::string, std::string, std::less<>>;

/// Substitutes every {{name}} in `tmpl`. A placeholder with no value throws
/// TemplateError; unused values are ignored.
std::string render_template(std::string_view tmpl, const TemplateValues& values);

std::set<std::string> placeholders(std::string_view tmpl);

}  // namespace counselforge::synthgen
