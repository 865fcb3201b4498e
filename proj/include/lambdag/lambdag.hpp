#pragma once

#include "lambdag/analyze.hpp"
#include "lambdag/formula.hpp"
#include "lambdag/frontend.hpp"
#include "lambdag/rewrite.hpp"
#include "lambdag/strategy.hpp"
#include "lambdag/term.hpp"
#include "lambdag/typing.hpp"
