#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <png.h>

#include "deptype/classes.hpp"
#include "deptype/corpus.hpp"
#include "deptype/error.hpp"
#include "deptype/font.hpp"
#include "deptype/models/artifact.hpp"

namespace deptype {

struct ConfusionMatrix {
  std::vector<DepressionClass> label_order{kAllClasses.begin(), kAllClasses.end()};
  // counts[true][predicted], indexed by position in label_order.
  std::array<std::array<long, kNumClasses>, kNumClasses> counts{};

  void add(int truth, int predicted) { ++counts.at(truth).at(predicted); }
  long total() const {
    long t = 0;
    for (const auto& row : counts)
      for (long c : row) t += c;
    return t;
  }
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
  // Set when the rate's denominator was zero and 0 was reported instead.
  bool precision_undefined = false;
  bool recall_undefined = false;
};

struct AggregateMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::array<ClassMetrics, kNumClasses> per_class{};
  double accuracy = 0.0;
  AggregateMetrics macro, weighted, micro;
  ConfusionMatrix confusion;
  std::string model_kind;
  std::string dataset_id;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json pc = nlohmann::ordered_json::object();
    for (int c = 0; c < kNumClasses; ++c) {
      const auto& m = per_class[c];
      pc[std::string(class_name(confusion.label_order[c]))] = {{"precision", m.precision},
                                                              {"recall", m.recall},
                                                              {"f1", m.f1},
                                                              {"support", m.support},
                                                              {"precision_undefined", m.precision_undefined},
                                                              {"recall_undefined", m.recall_undefined}};
    }
    auto agg = [](const AggregateMetrics& a) {
      return nlohmann::ordered_json{{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}};
    };
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (auto c : confusion.label_order) labels.push_back(class_name(c));
    nlohmann::ordered_json grid = nlohmann::ordered_json::array();
    for (const auto& row : confusion.counts) grid.push_back(row);
    return {{"model_kind", model_kind},
            {"dataset_id", dataset_id},
            {"per_class", std::move(pc)},
            {"overall",
             {{"accuracy", accuracy}, {"macro", agg(macro)}, {"weighted", agg(weighted)}, {"micro", agg(micro)}}},
            {"confusion", {{"label_order", std::move(labels)}, {"counts", std::move(grid)}}}};
  }
};

inline double f1_score(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

inline EvalReport report_from_confusion(const ConfusionMatrix& cm, std::string model_kind = {},
                                        std::string dataset_id = {}) {
  EvalReport r;
  r.confusion = cm;
  r.model_kind = std::move(model_kind);
  r.dataset_id = std::move(dataset_id);
  const long total = cm.total();
  if (total == 0) throw DataError("cannot evaluate an empty confusion matrix");

  long correct = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    long predicted = 0, support = 0;
    for (int k = 0; k < kNumClasses; ++k) {
      predicted += cm.counts[k][c];
      support += cm.counts[c][k];
    }
    const long tp = cm.counts[c][c];
    correct += tp;
    auto& m = r.per_class[c];
    m.support = support;
    m.precision_undefined = predicted == 0;
    m.recall_undefined = support == 0;
    m.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
    m.recall = support == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(support);
    m.f1 = f1_score(m.precision, m.recall);
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(total);

  for (const auto& m : r.per_class) {
    r.macro.precision += m.precision;
    r.macro.recall += m.recall;
    r.macro.f1 += m.f1;
    r.weighted.precision += static_cast<double>(m.support) * m.precision;
    r.weighted.recall += static_cast<double>(m.support) * m.recall;
    r.weighted.f1 += static_cast<double>(m.support) * m.f1;
  }
  r.macro.precision /= kNumClasses;
  r.macro.recall /= kNumClasses;
  r.macro.f1 /= kNumClasses;
  r.weighted.precision /= static_cast<double>(total);
  r.weighted.recall /= static_cast<double>(total);
  r.weighted.f1 /= static_cast<double>(total);
  // Every prediction is a TP for its predicted class or an FP, and every
  // miss an FN, so pooled P and R both reduce to accuracy.
  r.micro = {r.accuracy, r.accuracy, f1_score(r.accuracy, r.accuracy)};
  return r;
}

inline EvalReport evaluate(const ModelArtifact& artifact, const std::vector<LabeledExample>& examples,
                           std::string dataset_id = {}) {
  if (examples.empty()) throw DataError("cannot evaluate on an empty example list");
  ConfusionMatrix cm;
  cm.label_order = artifact.label_order;
  auto position = [&](DepressionClass c) {
    const auto it = std::find(cm.label_order.begin(), cm.label_order.end(), c);
    return static_cast<int>(it - cm.label_order.begin());
  };
  for (const auto& e : examples) cm.add(position(e.label), position(artifact.predict(e.clean_text).label));
  return report_from_confusion(cm, std::string(model_kind_name(artifact.kind)), std::move(dataset_id));
}

// ---------------------------------------------------------------------------
// Comparison table

struct ComparisonRow {
  std::string model;
  std::string dataset_id;
  double accuracy, precision, recall, f1;
};

struct ComparisonTable {
  std::string aggregation = "weighted";
  std::vector<ComparisonRow> rows;

  std::string header_text() const {
    return "Model comparison (precision/recall/F1 aggregation: " + aggregation + ")";
  }

  std::string to_text() const {
    std::size_t name_w = 5, data_w = 7;
    for (const auto& r : rows) {
      name_w = std::max(name_w, r.model.size());
      data_w = std::max(data_w, r.dataset_id.size());
    }
    std::ostringstream out;
    out << header_text() << '\n';
    out << std::left << std::setw(static_cast<int>(name_w)) << "model" << "  " << std::setw(static_cast<int>(data_w))
        << "dataset" << std::right << "  " << std::setw(8) << "accuracy" << "  " << std::setw(9) << "precision"
        << "  " << std::setw(8) << "recall" << "  " << std::setw(8) << "f1" << '\n';
    out << std::fixed << std::setprecision(4);
    for (const auto& r : rows)
      out << std::left << std::setw(static_cast<int>(name_w)) << r.model << "  "
          << std::setw(static_cast<int>(data_w)) << r.dataset_id << std::right << "  " << std::setw(8) << r.accuracy
          << "  " << std::setw(9) << r.precision << "  " << std::setw(8) << r.recall << "  " << std::setw(8) << r.f1
          << '\n';
    return out.str();
  }

  std::string to_csv() const {
    std::ostringstream out;
    out << "model,dataset,accuracy," << aggregation << "_precision," << aggregation << "_recall," << aggregation
        << "_f1\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& r : rows)
      out << r.model << ',' << r.dataset_id << ',' << r.accuracy << ',' << r.precision << ',' << r.recall << ','
          << r.f1 << '\n';
    return out.str();
  }
};

// Rows sorted by accuracy, best first; equal accuracies keep input order.
inline ComparisonTable compare_models(const std::vector<EvalReport>& reports) {
  ComparisonTable t;
  for (const auto& r : reports)
    t.rows.push_back({r.model_kind, r.dataset_id, r.accuracy, r.weighted.precision, r.weighted.recall, r.weighted.f1});
  std::stable_sort(t.rows.begin(), t.rows.end(),
                   [](const ComparisonRow& a, const ComparisonRow& b) { return a.accuracy > b.accuracy; });
  return t;
}

// ---------------------------------------------------------------------------
// Curve plots

// Output is kPlotWidth x kPlotHeight RGB, tagged 96 dpi.
inline constexpr int kPlotWidth = 960;
inline constexpr int kPlotHeight = 400;
inline constexpr int kPlotDpi = 96;

namespace detail {

struct Rgb {
  std::uint8_t r, g, b;
};

class Canvas {
 public:
  Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<std::size_t>(w * h * 3), 255) {}

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
    auto* p = &px_[static_cast<std::size_t>((y * w_ + x) * 3)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  void line(int x0, int y0, int x1, int y1, Rgb c, int thickness = 1) {
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
      for (int a = 0; a < thickness; ++a)
        for (int b = 0; b < thickness; ++b) set(x0 + a - thickness / 2, y0 + b - thickness / 2, c);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  void dot(int x, int y, Rgb c, int radius = 3) {
    for (int a = -radius; a <= radius; ++a)
      for (int b = -radius; b <= radius; ++b)
        if (a * a + b * b <= radius * radius) set(x + a, y + b, c);
  }

  int text_width(std::string_view s) const {
    int w = 0;
    for (char ch : s) w += glyph(ch).advance;
    return w;
  }

  void text(int x, int y, std::string_view s, Rgb c) {
    for (char ch : s) {
      const auto& g = glyph(ch);
      for (int row = 0; row < font::kHeight; ++row)
        for (int col = 0; col < 16; ++col)
          if (g.rows[row] & (1u << col)) set(x + col, y + row, c);
      x += g.advance;
    }
  }

  // Text rotated 90 degrees counter-clockwise, reading bottom to top from (x, y).
  void text_vertical(int x, int y, std::string_view s, Rgb c) {
    for (char ch : s) {
      const auto& g = glyph(ch);
      for (int row = 0; row < font::kHeight; ++row)
        for (int col = 0; col < 16; ++col)
          if (g.rows[row] & (1u << col)) set(x + row, y - col, c);
      y -= g.advance;
    }
  }

  void write_png(const std::filesystem::path& path, int dpi) const {
    FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw MissingResource("cannot write plot to " + path.string(), path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
      png_destroy_write_struct(&png, &info);
      std::fclose(fp);
      throw DataError("PNG encoding failed for " + path.string());
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w_), static_cast<png_uint_32>(h_), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    const auto ppm = static_cast<png_uint_32>(std::lround(dpi / 0.0254));
    png_set_pHYs(png, info, ppm, ppm, PNG_RESOLUTION_METER);
    png_write_info(png, info);
    for (int y = 0; y < h_; ++y)
      png_write_row(png, const_cast<png_bytep>(&px_[static_cast<std::size_t>(y * w_ * 3)]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fclose(fp) != 0) throw MissingResource("cannot write plot to " + path.string(), path.string());
  }

 private:
  static const font::Glyph& glyph(char ch) {
    const int i = static_cast<unsigned char>(ch) - 32;
    return font::kGlyphs[(i >= 0 && i < 95) ? i : '?' - 32];
  }

  int w_, h_;
  std::vector<std::uint8_t> px_;
};

// One x-axis tick per epoch, labelled 1..n.
inline std::vector<int> epoch_ticks(std::size_t n) {
  std::vector<int> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<int>(i) + 1;
  return t;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline void draw_panel(Canvas& cv, int left, int top, int width, int height, const std::string& title,
                       const std::string& y_label, const std::vector<double>& train, const std::vector<double>& val,
                       bool unit_range) {
  constexpr Rgb black{0, 0, 0}, grid{225, 225, 225}, blue{31, 119, 180}, orange{255, 127, 14};
  const int n = static_cast<int>(train.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* s : {&train, &val})
    for (double v : *s)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (unit_range) lo = std::min(lo, 0.0), hi = std::max(hi, 1.0);
  if (hi - lo < 1e-9) hi = lo + 1.0;
  const double pad = unit_range ? 0.0 : 0.05 * (hi - lo);
  lo = lo >= 0.0 ? std::max(0.0, lo - pad) : lo - pad;
  hi += pad;

  const int x0 = left, x1 = left + width, y0 = top + height, y1 = top;
  auto px = [&](int epoch) {
    return n == 1 ? (x0 + x1) / 2 : x0 + static_cast<int>(std::lround((epoch - 1) * double(width) / (n - 1)));
  };
  auto py = [&](double v) { return y0 - static_cast<int>(std::lround((v - lo) / (hi - lo) * height)); };

  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    const int y = py(v);
    cv.line(x0, y, x1, y, grid);
    const auto label = tick_label(v);
    cv.text(x0 - 6 - cv.text_width(label), y - font::kHeight / 2, label, black);
  }
  cv.line(x0, y0, x1, y0, black);
  cv.line(x0, y0, x0, y1, black);
  const auto ticks = epoch_ticks(train.size());
  for (std::size_t i = 0; i < ticks.size(); ++i) {
    const int x = px(ticks[i]);
    cv.line(x, y0, x, y0 + 4, black);
    const auto label = std::to_string(ticks[i]);
    cv.text(x - cv.text_width(label) / 2, y0 + 7, label, black);
  }
  cv.text(left + (width - cv.text_width(title)) / 2, top - 24, title, black);
  cv.text(left + (width - cv.text_width("Epoch")) / 2, y0 + 24, "Epoch", black);
  cv.text_vertical(left - 58, top + (height + cv.text_width(y_label)) / 2, y_label, black);

  auto series = [&](const std::vector<double>& s, Rgb c) {
    for (int e = 1; e <= n; ++e) {
      if (!std::isfinite(s[e - 1])) continue;
      if (e > 1 && std::isfinite(s[e - 2])) cv.line(px(e - 1), py(s[e - 2]), px(e), py(s[e - 1]), c, 2);
      cv.dot(px(e), py(s[e - 1]), c);
    }
  };
  series(train, blue);
  series(val, orange);

  const int lx = x1 - 110, ly = unit_range ? y0 - 40 : top + 8;
  cv.line(lx, ly + 5, lx + 18, ly + 5, blue, 2);
  cv.text(lx + 24, ly, "train", black);
  cv.line(lx, ly + 21, lx + 18, ly + 21, orange, 2);
  cv.text(lx + 24, ly + 16, "validation", black);
}

}  // namespace detail

// Two panels side by side: loss (left) and accuracy (right), each with the
// train and validation series over epochs 1..n.
inline void plot_curves(const nn::TrainingHistory& history, const std::filesystem::path& out,
                        const std::string& title = {}) {
  if (history.empty()) throw DataError("cannot plot an empty training history");
  std::vector<double> tl, vl, ta, va;
  for (const auto& r : history) {
    tl.push_back(r.train_loss);
    vl.push_back(r.val_loss);
    ta.push_back(r.train_accuracy);
    va.push_back(r.val_accuracy);
  }
  detail::Canvas cv(kPlotWidth, kPlotHeight);
  const std::string prefix = title.empty() ? "" : title + ": ";
  detail::draw_panel(cv, 90, 50, 350, 290, prefix + "training and validation loss", "Loss", tl, vl, false);
  detail::draw_panel(cv, 570, 50, 350, 290, prefix + "training and validation accuracy", "Accuracy", ta, va, true);
  cv.write_png(out, kPlotDpi);
}

}  // namespace deptype
