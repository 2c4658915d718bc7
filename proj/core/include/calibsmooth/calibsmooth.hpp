#pragma once

#include "calibsmooth/dataset.hpp"
#include "calibsmooth/diagram.hpp"
#include "calibsmooth/errors.hpp"
#include "calibsmooth/fft.hpp"
#include "calibsmooth/io.hpp"
#include "calibsmooth/kernel.hpp"
#include "calibsmooth/metrics.hpp"
#include "calibsmooth/oracle.hpp"
#include "calibsmooth/smece.hpp"
