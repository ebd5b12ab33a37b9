#pragma once

#include "hods/discrepancy.hpp"
#include "hods/duality.hpp"
#include "hods/error.hpp"
#include "hods/genmat.hpp"
#include "hods/gf2.hpp"
#include "hods/io.hpp"
#include "hods/points.hpp"
#include "hods/walsh.hpp"
