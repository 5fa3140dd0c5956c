#pragma once
// Single include for the whole toolkit.

#include "oclog/analysis.hpp"
#include "oclog/convert.hpp"
#include "oclog/errors.hpp"
#include "oclog/formats.hpp"
#include "oclog/generate.hpp"
#include "oclog/loss.hpp"
#include "oclog/model.hpp"
#include "oclog/refine.hpp"
#include "oclog/specs.hpp"
#include "oclog/time.hpp"
#include "oclog/validate.hpp"
#include "oclog/value.hpp"
