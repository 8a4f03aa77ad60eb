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

#ifndef SVS_EVAL_PLOT_H_
#define SVS_EVAL_PLOT_H_

#include <torch/torch.h>

#include <cstdint>
#include <string>
#include <vector>

#include "svs/eval/metrics.h"

namespace svs {

// What one panel shows: a magnitude spectrogram with the energy contour in
// yellow and the pitch contour in blue.
struct PanelData {
  torch::Tensor spectrogram;  // [bins, T] linear magnitudes
  Contours contours;
};

struct RgbImage {
  int width = 0, height = 0;
  std::vector<uint8_t> pixels;  // row-major RGB

  const uint8_t* at(int x, int y) const { return &pixels[(static_cast<size_t>(y) * width + x) * 3]; }
};

struct PlotLayout {
  int column_width = 2;   // pixels per frame
  int panel_height = 240;
  int gap = 8;            // pixels between the panels
  double f0_max_hz = 800.0;
};

// Row (from the top) where each frame's contour is drawn; -1 for unvoiced
// pitch frames. Energy rows use a log scale shared by both panels.
struct ContourPixels {
  std::vector<int> energy_rows;
  std::vector<int> f0_rows;
};

// Renders reference (left) and synthesis (right). Both panels share the
// spectrogram and energy scales, so identical inputs give identical panels.
RgbImage RenderReport(const PanelData& ref, const PanelData& syn, const PlotLayout& layout,
                      ContourPixels* ref_pixels = nullptr, ContourPixels* syn_pixels = nullptr);

// Writes the PNG at `path` and the plotted contour values (and their pixel
// rows) to `path` + ".json". Throws WriteFailure.
void PlotReport(const PanelData& ref, const PanelData& syn, const std::string& path,
                const PlotLayout& layout = {});

void WritePng(const std::string& path, const RgbImage& image);
RgbImage ReadPng(const std::string& path);

}  // namespace svs

#endif  // SVS_EVAL_PLOT_H_
