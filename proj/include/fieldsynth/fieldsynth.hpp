#pragma once

#include "fieldsynth/annotation.hpp"
#include "fieldsynth/camera.hpp"
#include "fieldsynth/color.hpp"
#include "fieldsynth/config.hpp"
#include "fieldsynth/dataset.hpp"
#include "fieldsynth/errors.hpp"
#include "fieldsynth/eval.hpp"
#include "fieldsynth/field_geometry.hpp"
#include "fieldsynth/line_class.hpp"
#include "fieldsynth/noise.hpp"
#include "fieldsynth/png_io.hpp"
#include "fieldsynth/randomization.hpp"
#include "fieldsynth/raster.hpp"
#include "fieldsynth/renderer.hpp"
#include "fieldsynth/rng.hpp"
#include "fieldsynth/scene_io.hpp"
