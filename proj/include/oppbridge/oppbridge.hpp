#pragma once

#include "oppbridge/diagnostic.hpp"
#include "oppbridge/emit.hpp"
#include "oppbridge/error.hpp"
#include "oppbridge/graph.hpp"
#include "oppbridge/makefile.hpp"
#include "oppbridge/makemake.hpp"
#include "oppbridge/manifest.hpp"
#include "oppbridge/omnetpp.hpp"
#include "oppbridge/paths.hpp"
#include "oppbridge/tokenizer.hpp"
