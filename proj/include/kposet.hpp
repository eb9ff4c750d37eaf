#pragma once

#include "kposet/analysis.hpp"
#include "kposet/automata.hpp"
#include "kposet/codec.hpp"
#include "kposet/complexity.hpp"
#include "kposet/error.hpp"
#include "kposet/limitops.hpp"
#include "kposet/poset.hpp"
#include "kposet/quotient.hpp"
#include "kposet/rankvm.hpp"
