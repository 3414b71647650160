#ifndef DOCBIN_DOCBIN_HPP
#define DOCBIN_DOCBIN_HPP

// Umbrella header for the document binarization toolkit.

#include "docbin/config.hpp"
#include "docbin/dataset.hpp"
#include "docbin/enhance.hpp"
#include "docbin/errors.hpp"
#include "docbin/hybrid.hpp"
#include "docbin/image.hpp"
#include "docbin/io.hpp"
#include "docbin/metrics.hpp"
#include "docbin/pipeline.hpp"
#include "docbin/postprocess.hpp"
#include "docbin/raster.hpp"
#include "docbin/threshold_global.hpp"
#include "docbin/threshold_local.hpp"

#endif  // DOCBIN_DOCBIN_HPP
