#pragma once

#include "webrank/abelrank.hpp"
#include "webrank/catalog.hpp"
#include "webrank/combin.hpp"
#include "webrank/expr.hpp"
#include "webrank/io.hpp"
#include "webrank/jets.hpp"
#include "webrank/ordinary.hpp"
#include "webrank/parser.hpp"
#include "webrank/rank.hpp"
#include "webrank/taylor.hpp"
#include "webrank/web.hpp"
