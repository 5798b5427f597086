#include "counselforge/eval/summary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "counselforge/common/errors.hpp"
#include "counselforge/common/jsonl.hpp"
#include "counselforge/common/text.hpp"

namespace counselforge::eval {

using nlohmann::json;
namespace fs = std::filesystem;

MetricStats describe(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("no values to describe");
  std::sort(values.begin(), values.end());
  MetricStats s;
  s.n = values.size();
  s.min = values.front();
  s.max = values.back();
  const std::size_t mid = s.n / 2;
  s.median = s.n % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(s.n));
  return s;
}

RunSummary summarize(const std::vector<ScorePair>& scores) {
  if (scores.empty()) throw PreconditionError("no scores to summarize");
  std::vector<std::string> order;
  std::map<std::string, std::array<std::vector<double>, 3>> by_model;
  for (const auto& s : scores) {
    auto [it, inserted] = by_model.try_emplace(s.model_label);
    if (inserted) order.push_back(s.model_label);
    it->second[0].push_back(s.empathy);
    it->second[1].push_back(s.relevance);
    it->second[2].push_back(s.combined());
  }
  RunSummary out;
  for (const auto& label : order) {
    auto& v = by_model.at(label);
    out.models.push_back(ModelSummary{label, describe(v[0]), describe(v[1]), describe(v[2])});
  }
  return out;
}

namespace {

struct MetricView {
  const char* name;
  const MetricStats& (*get)(const ModelSummary&);
};

const std::array<MetricView, 3> kMetrics{{
    {"empathy", [](const ModelSummary& m) -> const MetricStats& { return m.empathy; }},
    {"relevance", [](const ModelSummary& m) -> const MetricStats& { return m.relevance; }},
    {"combined", [](const ModelSummary& m) -> const MetricStats& { return m.combined; }},
}};

double metric_of(const ScorePair& s, std::string_view metric) {
  if (metric == "empathy") return s.empathy;
  if (metric == "relevance") return s.relevance;
  return s.combined();
}

constexpr std::array<const char*, 6> kPalette{"#4e79a7", "#f28e2b", "#59a14f",
                                              "#e15759", "#76b7b2", "#b07aa1"};

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Shared frame: plot area [left, left + w] x [top, top + h], y axis 0..10.
struct Frame {
  double left = 60, top = 40, w = 520, h = 300;
  double y_of(double v) const { return top + h - v / 10.0 * h; }
};

std::string svg_open(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n"
      "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
      escape_xml(title));
}

std::string y_axis(const Frame& f, std::string_view label, double max_value) {
  std::string out = fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{2}\" x2=\"{3}\" y2=\"{2}\" stroke=\"black\"/>\n",
      f.left, f.top, f.top + f.h, f.left + f.w);
  for (int i = 0; i <= 5; ++i) {
    const double v = max_value * i / 5.0;
    const double y = f.top + f.h - f.h * i / 5.0;
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.1f}\" x2=\"{2}\" y2=\"{1:.1f}\" stroke=\"#ddd\"/>\n"
        "<text x=\"{3}\" y=\"{4:.1f}\" text-anchor=\"end\">{5:g}</text>\n",
        f.left, y, f.left + f.w, f.left - 6, y + 4, v);
  }
  out += fmt::format(
      "<text x=\"16\" y=\"{:.1f}\" transform=\"rotate(-90 16 {:.1f})\" "
      "text-anchor=\"middle\">{}</text>\n",
      f.top + f.h / 2, f.top + f.h / 2, escape_xml(label));
  return out;
}

std::string legend(const RunSummary& summary, double x, double y) {
  std::string out;
  for (std::size_t i = 0; i < summary.models.size(); ++i) {
    out += fmt::format(
        "<rect x=\"{0}\" y=\"{1}\" width=\"10\" height=\"10\" fill=\"{2}\"/>"
        "<text x=\"{3}\" y=\"{4}\">{5}</text>\n",
        x, y + 16.0 * i, kPalette[i % kPalette.size()], x + 14, y + 16.0 * i + 9,
        escape_xml(summary.models[i].label));
  }
  return out;
}

std::size_t bin_of(double v) {
  return static_cast<std::size_t>(std::clamp(std::floor(v), 0.0, 9.0));
}

std::string distribution_svg(const RunSummary& summary, const std::vector<ScorePair>& scores) {
  const Frame f;
  std::vector<std::array<std::size_t, 10>> counts(summary.models.size());
  for (auto& c : counts) c.fill(0);
  std::size_t peak = 1;
  for (const auto& s : scores) {
    for (std::size_t m = 0; m < summary.models.size(); ++m) {
      if (summary.models[m].label == s.model_label) {
        peak = std::max(peak, ++counts[m][bin_of(s.combined())]);
      }
    }
  }
  std::string out = svg_open("Distribution of combined scores by model");
  out += y_axis(f, "conversations", static_cast<double>(peak));
  const double bin_w = f.w / 10.0;
  const double bar_w = (bin_w - 6) / std::max<std::size_t>(1, summary.models.size());
  for (std::size_t b = 0; b < 10; ++b) {
    for (std::size_t m = 0; m < counts.size(); ++m) {
      const double h = f.h * static_cast<double>(counts[m][b]) / static_cast<double>(peak);
      out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"/>\n",
                         f.left + b * bin_w + 3 + m * bar_w, f.top + f.h - h, bar_w, h,
                         kPalette[m % kPalette.size()]);
    }
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}-{}</text>\n",
                       f.left + (b + 0.5) * bin_w, f.top + f.h + 16, b, b + 1);
  }
  out += legend(summary, f.left + f.w - 90, f.top + 6);
  return out + "</svg>\n";
}

std::string scatter_svg(const RunSummary& summary, const std::vector<ScorePair>& scores) {
  const Frame f;
  std::string out = svg_open("Empathy vs relevance");
  out += y_axis(f, "relevance", 10.0);
  for (int i = 0; i <= 5; ++i) {
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                       f.left + f.w * i / 5.0, f.top + f.h + 16, i * 2);
  }
  out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">empathy</text>\n",
                     f.left + f.w / 2, f.top + f.h + 34);
  for (const auto& s : scores) {
    std::size_t m = 0;
    while (m < summary.models.size() && summary.models[m].label != s.model_label) ++m;
    out += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"4\" fill=\"{}\" fill-opacity=\"0.7\"/>\n",
                       f.left + s.empathy / 10.0 * f.w, f.y_of(s.relevance),
                       kPalette[m % kPalette.size()]);
  }
  out += legend(summary, f.left + 10, f.top + 6);
  return out + "</svg>\n";
}

std::string metric_svg(const RunSummary& summary, const MetricView& metric) {
  const Frame f;
  std::string out = svg_open(fmt::format("Mean {} by model (min-max whiskers)", metric.name));
  out += y_axis(f, metric.name, 10.0);
  const double slot = f.w / std::max<std::size_t>(1, summary.models.size());
  for (std::size_t m = 0; m < summary.models.size(); ++m) {
    const auto& st = metric.get(summary.models[m]);
    const double cx = f.left + (m + 0.5) * slot;
    const double bw = std::min(80.0, slot * 0.6);
    out += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"/>\n"
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"black\"/>\n"
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:.2f}</text>\n"
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
        cx - bw / 2, f.y_of(st.mean), bw, f.top + f.h - f.y_of(st.mean),
        kPalette[m % kPalette.size()], cx, f.y_of(st.min), cx, f.y_of(st.max), cx,
        f.y_of(st.max) - 6, st.mean, cx, f.top + f.h + 16, escape_xml(summary.models[m].label));
  }
  return out + "</svg>\n";
}

}  // namespace

std::string render_summary_table(const RunSummary& summary) {
  std::string out = "| Model | Metric | Mean | Median | Std | Min | Max |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (const auto& m : summary.models) {
    for (const auto& metric : kMetrics) {
      const auto& s = metric.get(m);
      out += fmt::format("| {} | {} | {:.2f} | {:.2f} | {:.2f} | {:.2f} | {:.2f} |\n", m.label,
                         metric.name, s.mean, s.median, s.std, s.min, s.max);
    }
  }
  return out;
}

std::vector<fs::path> emit_report(const RunSummary& summary, const std::vector<ScorePair>& scores,
                                  const std::vector<ScoreGap>& gaps, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> written;
  auto put = [&](const std::string& name, const std::string& body) {
    write_text_file_atomic(dir / name, body);
    written.push_back(dir / name);
  };

  std::string md = "# Benchmark summary\n\n" + render_summary_table(summary);
  md += fmt::format("\n{} scored conversations, {} unscored cells.\n", scores.size(), gaps.size());
  put("summary.md", md);
  write_json_file(dir / "summary.json", json{{"summary", summary}, {"gaps", gaps}});
  written.push_back(dir / "summary.json");

  std::string csv = "model_label,metric,mean,median,std,min,max,n\n";
  for (const auto& m : summary.models) {
    for (const auto& metric : kMetrics) {
      const auto& s = metric.get(m);
      csv += fmt::format("{},{},{},{},{},{},{},{}\n", text::csv_field(m.label), metric.name,
                         s.mean, s.median, s.std, s.min, s.max, s.n);
    }
  }
  put("summary.csv", csv);

  std::string dist = "model_label,metric,bin_lower,bin_upper,count\n";
  for (const auto& m : summary.models) {
    for (const auto& metric : kMetrics) {
      std::array<std::size_t, 10> counts{};
      for (const auto& s : scores) {
        if (s.model_label == m.label) ++counts[bin_of(metric_of(s, metric.name))];
      }
      for (std::size_t b = 0; b < 10; ++b) {
        dist += fmt::format("{},{},{},{},{}\n", text::csv_field(m.label), metric.name, b, b + 1,
                            counts[b]);
      }
    }
  }
  put("distribution.csv", dist);

  std::string scatter = "situation_id,model_label,empathy,relevance\n";
  for (const auto& s : scores) {
    scatter += fmt::format("{},{},{},{}\n", text::csv_field(s.situation_id),
                           text::csv_field(s.model_label), s.empathy, s.relevance);
  }
  put("scores_scatter.csv", scatter);

  put("distribution.svg", distribution_svg(summary, scores));
  put("scatter.svg", scatter_svg(summary, scores));
  put("empathy_by_model.svg", metric_svg(summary, kMetrics[0]));
  put("relevance_by_model.svg", metric_svg(summary, kMetrics[1]));
  return written;
}

void to_json(json& j, const MetricStats& s) {
  j = json{{"mean", s.mean}, {"median", s.median}, {"std", s.std},
           {"min", s.min},   {"max", s.max},       {"n", s.n}};
}

void to_json(json& j, const RunSummary& s) {
  j = json::array();
  for (const auto& m : s.models) {
    j.push_back(json{{"label", m.label},
                     {"empathy", m.empathy},
                     {"relevance", m.relevance},
                     {"combined", m.combined}});
  }
}

}  // namespace counselforge::eval
