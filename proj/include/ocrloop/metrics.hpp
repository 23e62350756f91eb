#pragma once

// Umbrella header for the scoring kernels. All of these are pure
// functions, safe for unrestricted concurrent use.

#include "ocrloop/metrics/anls.hpp"
#include "ocrloop/metrics/counting.hpp"
#include "ocrloop/metrics/extraction_f1.hpp"
#include "ocrloop/metrics/iou.hpp"
#include "ocrloop/metrics/levenshtein.hpp"
#include "ocrloop/metrics/score.hpp"
#include "ocrloop/metrics/table_tree.hpp"
#include "ocrloop/metrics/teds.hpp"
#include "ocrloop/metrics/text_scores.hpp"
#include "ocrloop/metrics/vqa.hpp"
