/*
 * Copyright 2026 The pragmatune Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pragmatune/report.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "pragmatune/error.h"

namespace pragmatune {
namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 500;
constexpr double kLeft = 80;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;
constexpr int kTicks = 5;

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

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

}  // namespace

RecordCounts count_records(std::span<const EvalRecord> records) {
  RecordCounts c;
  for (const EvalRecord& r : records) {
    ++c.total;
    if (r.status == EvalStatus::kOk) {
      ++c.ok;
    } else if (r.status == EvalStatus::kDuplicate) {
      ++c.duplicate;
    } else {
      ++c.failed;
    }
  }
  return c;
}

std::string format_configuration(const ParamSpace& space,
                                 const Configuration& config) {
  std::string out;
  for (std::size_t i = 0; i < space.num_parameters(); ++i) {
    auto v = space.value(config, i);
    out += space.parameter(i).name + "=" +
           (v ? std::string(*v) : std::string("<inactive>")) + "\n";
  }
  return out;
}

std::string render_report(const PerfDb& db) {
  const EvalRecord& best = find_min(db);
  const RecordCounts c = count_records(db.records());
  std::ostringstream out;
  out << "best=" << format_seconds(*best.objective) << "\n";
  out << "at evaluation " << best.index << " of " << c.total << "\n";
  out << format_configuration(db.space(), best.config);
  out << "evaluations=" << c.total << " ok=" << c.ok << " failed=" << c.failed
      << " duplicate=" << c.duplicate << "\n";
  return out.str();
}

std::vector<TraceRow> trace_rows(std::span<const EvalRecord> records) {
  std::vector<TraceRow> rows;
  std::optional<double> best;
  for (const EvalRecord& r : records) {
    TraceRow row{r.index, std::nullopt, best};
    if (r.status == EvalStatus::kOk) {
      row.objective = r.objective;
      best = best ? std::min(*best, *r.objective) : *r.objective;
      row.best_so_far = best;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string trace_csv(std::span<const TraceRow> rows) {
  std::string out = "index,objective,best_so_far\n";
  for (const TraceRow& r : rows) {
    out += std::to_string(r.index) + ",";
    if (r.objective) out += format_seconds(*r.objective);
    out += ",";
    if (r.best_so_far) out += format_seconds(*r.best_so_far);
    out += "\n";
  }
  return out;
}

std::string trace_svg(std::span<const TraceRow> rows,
                      const std::string& title) {
  std::vector<const TraceRow*> with_best;
  for (const TraceRow& r : rows) {
    if (r.best_so_far) with_best.push_back(&r);
  }
  if (with_best.empty()) {
    throw Error(Errc::kNoSuccessfulEvaluation, "nothing to plot");
  }

  double x_min = static_cast<double>(with_best.front()->index);
  double x_max = static_cast<double>(rows.back().index);
  double y_max = 0.0;
  for (const TraceRow* r : with_best) {
    if (r->objective) y_max = std::max(y_max, *r->objective);
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - y / y_max * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(title) << "</text>\n";

  // Axes and ticks.
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  svg << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= kTicks; ++t) {
    const double xv = x_min + (x_max - x_min) * t / kTicks;
    const double yv = y_max * t / kTicks;
    svg << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << kTop + plot_h + 16
        << "\" text-anchor=\"middle\">" << fmt(xv, 0) << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py(yv) + 4)
        << "\" text-anchor=\"end\">" << fmt(yv, 3) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">Evaluation</text>\n";
  svg << "<text x=\"20\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 20 "
      << kTop + plot_h / 2 << ")\">Runtime (s)</text>\n";

  std::string all_points;
  std::string markers;
  for (const TraceRow& r : rows) {
    if (!r.objective) continue;
    const std::string x = fmt(px(static_cast<double>(r.index)));
    const std::string y = fmt(py(*r.objective));
    all_points += (all_points.empty() ? "" : " ") + x + "," + y;
    markers += "<circle cx=\"" + x + "\" cy=\"" + y + "\" r=\"2\"/>\n";
  }
  std::string best_points;
  for (const TraceRow* r : with_best) {
    best_points += (best_points.empty() ? "" : " ") +
                   fmt(px(static_cast<double>(r->index))) + "," +
                   fmt(py(*r->best_so_far));
  }
  svg << "<polyline id=\"all\" fill=\"none\" stroke=\"blue\" stroke-width=\"1\" "
         "points=\""
      << all_points << "\"/>\n";
  svg << "<g fill=\"blue\">\n" << markers << "</g>\n";
  svg << "<polyline id=\"best\" fill=\"none\" stroke=\"red\" "
         "stroke-width=\"2\" points=\""
      << best_points << "\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pragmatune
