// Copyright (c) 2026 The svs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svs/eval/plot.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "svs/base/error.h"

namespace svs {

namespace {

constexpr uint8_t kEnergyColor[3] = {255, 215, 0};
constexpr uint8_t kPitchColor[3] = {30, 110, 255};

void Put(RgbImage& img, int x, int y, const uint8_t* rgb) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  std::copy(rgb, rgb + 3, &img.pixels[(static_cast<size_t>(y) * img.width + x) * 3]);
}

int RowFor(double norm, int height) {
  norm = std::clamp(norm, 0.0, 1.0);
  return static_cast<int>(std::lround((1.0 - norm) * (height - 1)));
}

// Draws one contour: a dot per frame plus a vertical join to the previous
// frame so the line stays connected. Rows < 0 break the line.
void DrawContour(RgbImage& img, int x0, int cw, const std::vector<int>& rows,
                 const uint8_t* rgb) {
  for (size_t t = 0; t < rows.size(); ++t) {
    if (rows[t] < 0) continue;
    for (int dx = 0; dx < cw; ++dx) Put(img, x0 + static_cast<int>(t) * cw + dx, rows[t], rgb);
    if (t > 0 && rows[t - 1] >= 0) {
      const int lo = std::min(rows[t], rows[t - 1]), hi = std::max(rows[t], rows[t - 1]);
      for (int y = lo; y <= hi; ++y) Put(img, x0 + static_cast<int>(t) * cw, y, rgb);
    }
  }
}

nlohmann::json PanelJson(const Contours& c, const ContourPixels& px) {
  return {{"energy", c.energy},
          {"f0_hz", c.f0_hz},
          {"energy_rows", px.energy_rows},
          {"f0_rows", px.f0_rows}};
}

}  // namespace

RgbImage RenderReport(const PanelData& ref, const PanelData& syn, const PlotLayout& layout,
                      ContourPixels* ref_pixels, ContourPixels* syn_pixels) {
  const int h = layout.panel_height;
  const int cw = layout.column_width;
  const int frames = static_cast<int>(
      std::max(ref.spectrogram.size(1), syn.spectrogram.size(1)));
  RgbImage img;
  img.width = 2 * frames * cw + layout.gap;
  img.height = h;
  img.pixels.assign(static_cast<size_t>(img.width) * h * 3, 0);

  // Shared scales: 80 dB of spectrogram range below the loudest bin, and the
  // log-energy range of both panels together.
  auto db_ref = torch::log10(ref.spectrogram.to(torch::kDouble) + 1e-5) * 20.0;
  auto db_syn = torch::log10(syn.spectrogram.to(torch::kDouble) + 1e-5) * 20.0;
  const double top = std::max(db_ref.max().item<double>(), db_syn.max().item<double>());
  const double bottom = top - 80.0;
  double e_lo = INFINITY, e_hi = -INFINITY;
  for (const auto* c : {&ref.contours, &syn.contours}) {
    for (double e : c->energy) {
      const double v = std::log(std::max(e, 1e-8));
      e_lo = std::min(e_lo, v);
      e_hi = std::max(e_hi, v);
    }
  }
  if (!(e_hi > e_lo)) e_hi = e_lo + 1.0;

  auto panel = [&](const PanelData& p, const torch::Tensor& db, int x0, ContourPixels* out) {
    const int bins = static_cast<int>(db.size(0));
    const int t_max = static_cast<int>(db.size(1));
    auto acc = db.accessor<double, 2>();
    for (int y = 0; y < h; ++y) {
      const int bin = static_cast<int>(std::lround(
          static_cast<double>(h - 1 - y) * (bins - 1) / std::max(1, h - 1)));
      for (int t = 0; t < t_max; ++t) {
        const double v = std::clamp((acc[bin][t] - bottom) / 80.0, 0.0, 1.0);
        const uint8_t g = static_cast<uint8_t>(std::lround(v * 200.0));
        const uint8_t rgb[3] = {g, g, g};
        for (int dx = 0; dx < cw; ++dx) Put(img, x0 + t * cw + dx, y, rgb);
      }
    }
    ContourPixels px;
    for (double e : p.contours.energy) {
      px.energy_rows.push_back(
          RowFor((std::log(std::max(e, 1e-8)) - e_lo) / (e_hi - e_lo), h));
    }
    for (double f : p.contours.f0_hz) {
      px.f0_rows.push_back(f > 0.0 ? RowFor(f / layout.f0_max_hz, h) : -1);
    }
    DrawContour(img, x0, cw, px.energy_rows, kEnergyColor);
    DrawContour(img, x0, cw, px.f0_rows, kPitchColor);
    if (out != nullptr) *out = std::move(px);
  };
  panel(ref, db_ref, 0, ref_pixels);
  panel(syn, db_syn, frames * cw + layout.gap, syn_pixels);
  return img;
}

void WritePng(const std::string& path, const RgbImage& image) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&png, path.c_str(), 0, image.pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::kWriteFailure, path + ": " + png.message);
  }
}

RgbImage ReadPng(const std::string& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw Error(ErrorCode::kIoError, path + ": " + png.message);
  }
  png.format = PNG_FORMAT_RGB;
  RgbImage img;
  img.width = static_cast<int>(png.width);
  img.height = static_cast<int>(png.height);
  img.pixels.resize(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, img.pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIoError, path + ": " + png.message);
  }
  return img;
}

void PlotReport(const PanelData& ref, const PanelData& syn, const std::string& path,
                const PlotLayout& layout) {
  ContourPixels ref_px, syn_px;
  auto img = RenderReport(ref, syn, layout, &ref_px, &syn_px);
  WritePng(path, img);
  nlohmann::json side = {{"column_width", layout.column_width},
                         {"panel_height", layout.panel_height},
                         {"gap", layout.gap},
                         {"f0_max_hz", layout.f0_max_hz},
                         {"ref", PanelJson(ref.contours, ref_px)},
                         {"syn", PanelJson(syn.contours, syn_px)}};
  std::ofstream out(path + ".json");
  out << side.dump() << "\n";
  if (!out) throw Error(ErrorCode::kWriteFailure, path + ".json");
}

}  // namespace svs
