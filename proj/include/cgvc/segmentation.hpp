#pragma once

#include <string>
#include <vector>

#include "cgvc/types.hpp"

namespace cgvc {

// Per-pixel object ids for one frame. 0 = background/unassigned, 1..M = objects.
struct LabelMap {
    int index = 0;
    Plane labels;
};

// Loads one P5 PGM per frame (frame_%06d.pgm) and renumbers ids to a
// contiguous 1..M range in first-appearance order (scanning frames in
// temporal order, pixels in raster order). Id 0 stays 0.
std::vector<LabelMap> load_label_maps(const std::string& dir, const VideoMeta& meta);

// Every pixel labeled 1; M = 1.
std::vector<LabelMap> whole_frame_segmentation(const VideoMeta& meta);

// rows x cols rectangles, ids assigned in row-major order, identical on
// every frame. rows*cols must not exceed 255.
std::vector<LabelMap> grid_segmentation(const VideoMeta& meta, int rows, int cols);

int count_objects(const std::vector<LabelMap>& maps);

void write_label_maps(const std::vector<LabelMap>& maps, const std::string& dir);

}  // namespace cgvc
