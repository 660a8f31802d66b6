#pragma once

#include "deptype/classes.hpp"
#include "deptype/corpus.hpp"
#include "deptype/error.hpp"
#include "deptype/eval.hpp"
#include "deptype/explain.hpp"
#include "deptype/features.hpp"
#include "deptype/lexicon.hpp"
#include "deptype/models/artifact.hpp"
#include "deptype/models/config.hpp"
#include "deptype/textprep.hpp"
