/*!
  \file io.hpp
  \brief Line-oriented text formats for compositions, programs and circuits

  Composition:
    COMPOSITION n=<n> k=<k> m=<m> d=<d>
    INNER <j> VARS <i1,...> TABLE <hex>
    OUTER <count>
    <m-bit key, inner 1 leftmost> -> <value>

  TABLE holds 2^|vars| bits, most significant hex digit first; bit a is the
  value when the listed coordinates take the bits of a.  Serialization is
  canonical: ascending VARS, lowercase hex of exactly ceil(2^|vars| / 4)
  digits, outer lines sorted by key.  The parser also accepts unsorted VARS
  and outer lines in any order.  Blank lines and lines starting with '#' are
  skipped.

  Branching program:
    BP n=<n> w=<w> L=<L> start=<s> accept={<s1>,...}
    LAYER <t> VAR <i> D0 <w states> D1 <w states>

  Depth-3 circuit (bottom gates and literals numbered from 1, '-' for empty):
    DEPTH3 n=<n> kind=<sigma3|pi3> k=<bottom fan-in bound> bottom=<B> middle=<M>
    BOTTOM <b> <literal,...>
    MIDDLE <j> GATES <b,...> LITS <literal,...>
*/

#pragma once

#include <string>
#include <string_view>

#include "branching.hpp"
#include "composition.hpp"
#include "depth3.hpp"
#include "infoflow.hpp"

namespace comploc
{

std::string serialize_composition( composition const& c );
composition parse_composition( std::string_view text );

std::string serialize_bp( branching_program const& bp );
branching_program parse_bp( std::string_view text );

std::string serialize_depth3( depth3_circuit const& d );
depth3_circuit parse_depth3( std::string_view text );

/*! \brief Header var,q,I,Hcond,escape; one row per variable, then
    all,<sum q>,<I_total>,<log2|D| - I_total>,<max escape> */
std::string info_csv( info_report const& r );

/*! \brief Weight interval "LO:HI" */
std::pair<unsigned, unsigned> parse_band( std::string_view text );

} // namespace comploc
