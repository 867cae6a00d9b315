#pragma once

// Convenience umbrella: the whole library in one include.

#include "rcc/ast.hpp"
#include "rcc/bitblast.hpp"
#include "rcc/check.hpp"
#include "rcc/compile_imp.hpp"
#include "rcc/difftest.hpp"
#include "rcc/error.hpp"
#include "rcc/eval.hpp"
#include "rcc/gen.hpp"
#include "rcc/imp.hpp"
#include "rcc/imp_run.hpp"
#include "rcc/inliner.hpp"
#include "rcc/monomorph.hpp"
#include "rcc/nat.hpp"
#include "rcc/nat_eval.hpp"
#include "rcc/nat_ir.hpp"
#include "rcc/natenc.hpp"
#include "rcc/natify.hpp"
#include "rcc/parser.hpp"
#include "rcc/pipeline.hpp"
#include "rcc/sexpr.hpp"
#include "rcc/symstate.hpp"
#include "rcc/tail_elim.hpp"
