#pragma once

#include <vector>

#include "wernerprep/constructions.hpp"

namespace fixtures {

struct TableRow {
  int d;
  const char* words;
  double lambda_max;
  wernerprep::ParamPoint params;
};

// Best-found configurations: dimension, generator words, listed lambda_max and parameters.
inline const std::vector<TableRow>& ranked_rows() {
  static const std::vector<TableRow> rows{
    {2, "V^-1U^-1V^-1U^-1V^-1U^-1h,UV", 0.45171364, {0.02040734, 0.93254821, 2.89447138, 4.87953210, {0.48788387}}},
    {2, "V^-1U^-1hV^-1U^-1V^-1U^-1,UV", 0.45177443, {2.22634490, 0.93273780, 0.56307152, 1.73613282, {0.48924909}}},
    {2, "V^-1U^-1V^-1U^-1hV^-1U^-1,UV", 0.45182053, {2.43540064, 0.93236651, 1.66719716, 1.73922016, {0.48660551}}},
    {2, "hV^-1U^-1V^-1U^-1V^-1U^-1,UV", 0.45247260, {4.66621475, 0.93266531, 5.80165408, 1.75004489, {0.48762139}}},
    {2, "h^-2UVh,h", 0.47131080, {5.51693231, 0.93397081, 6.03814570, 4.93978785, {0.54533411}}},
    {2, "h,UV", 0.47132816, {4.41035379, 0.93329073, 0.01310998, 4.13663214, {0.45454826}}},
    {2, "h^2UV,h", 0.47142342, {2.02524109, 0.93459679, 1.45866385, 2.59787038, {0.54513095}}},
    {2, "UVhV^-1U^-1,UV", 0.47156322, {5.19279314, 0.93309190, 1.74555195, 4.13291884, {0.45454065}}},
    {2, "V^-1U^-1hUV,UV", 0.47186921, {4.47128947, 0.93289846, 0.14492048, 4.13217062, {0.45463401}}},
    {2, "UVh^-1,h", 0.47214326, {4.49293324, 0.93363022, 2.91434885, 1.80069191, {0.54492723}}},
    {2, "hV,UV^-2,V", 0.08044643, {4.18274534, 0.91986392, 1.00676113, 2.40909110, {0.22305894, 0.42044878}}},
    {2, "Vh,V^-2U,V", 0.08613587, {5.29667689, 0.92036449, 4.14864868, 0.73242149, {0.22279991, 0.42048974}}},
    {2, "VhV^-1,VU,V", 0.08952903, {6.20626095, 0.41828259, 0.76691346, 6.15870903, {0.42214212, 0.13221572}}},
    {2, "Vh,V^-1U,V", 0.09185870, {5.85279091, 0.37513429, 1.39285807, 5.45805530, {0.43012512, 0.44798363}}},
    {2, "V^2h,UV^-1,V", 0.09211565, {4.02890429, 0.78175738, 4.83014038, 3.92323397, {0.38164265, 0.34479035}}},
    {2, "hV,VU,V", 0.09442135, {0.32144573, 0.89702868, 0.85925184, 5.64251529, {0.13668014, 0.44250114}}},
    {2, "hV,UV,V", 0.09645365, {3.45912305, 0.90414785, 4.35828799, 0.78092410, {0.31909686, 0.41524112}}},
    {2, "h,V^-2UV^-1,V", 0.10979778, {2.66859740, 0.42807350, 0.75082334, 3.06736006, {0.41127768, 0.16881174}}},
    {2, "Vh,UV,V", 0.10979894, {0.79450488, 0.86364152, 2.49111116, 2.48950978, {0.14233361, 0.44102029}}},
    {2, "V^-1h,UV^-1,V", 0.11122951, {1.75306750, 0.56171650, 5.23958689, 4.91760721, {0.33595959, 0.30103239}}},
    {3, "h,UV", 0.67402461, {2.86002806, 0.74921865, 3.66908666, 2.32545709, {0.49097422}}},
    {3, "h^-2UV,h", 0.67402857, {3.58040315, 0.74919715, 0.63798609, 4.42006854, {0.50905687}}},
    {3, "hUV,h", 0.67410727, {1.30053265, 0.74916229, 6.15894473, 1.27787623, {0.50896175}}},
    {3, "UVh^-2,h", 0.67416358, {2.61522285, 0.74952701, 6.0850070, 2.32701916, {0.50938744}}},
    {3, "h^-1UVh^-1,h", 0.67418091, {5.02413306, 0.74901570, 2.92768346, 2.32504626, {0.50911867}}},
    {3, "h^2UV,h", 0.67427969, {1.98220559, 0.74996984, 2.90787258, 0.22978137, {0.50864663}}},
    {3, "UVhV^-1U^-1,UV", 0.67438372, {0.12493273, 0.75030231, 3.56111816, 4.41811004, {0.49146879}}},
    {3, "UVh^-1,h", 0.67440881, {1.07883319, 0.74905991, 2.41860741, 5.47437286, {0.50996725}}},
    {3, "UVh,h", 0.67495927, {1.53261092, 0.74854204, 0.45067027, 1.29627404, {0.51126798}}},
    {3, "h^-1UV,h", 0.67541822, {5.78498571, 0.75226065, 1.53919481, 1.26622318, {0.50428252}}},
    {3, "h,UV,U", 0.55847203, {0.36470858, 0.58546063, 4.94276220, 1.53168497, {0.35903090, 0.41473933}}},
    {3, "h,U^-2V,U", 0.56003566, {4.58127581, 0.57185926, 2.67573573, 5.67626474, {0.32911909, 0.39704823}}},
    {3, "h,VU,U", 0.56253792, {2.46911311, 0.52749982, 5.50102328, 5.99468805, {0.34919650, 0.41712141}}},
    {3, "V^2h,UV,V", 0.56455353, {2.57411913, 0.47752815, 2.06239933, 3.46019409, {0.30865684, 0.40848157}}},
    {3, "h,V^-1UV^2,V", 0.56553419, {4.58450643, 0.59397997, 3.94475491, 4.90128165, {0.39833521, 0.39098377}}},
    {3, "h,VU^-2,U", 0.56574477, {2.23336623, 0.63624897, 5.11453739, 5.75914870, {0.29210269, 0.43785722}}},
    {3, "h,V^-2U,V", 0.56615350, {2.94321676, 0.30747956, 6.22028768, 5.94651517, {0.42198975, 0.41244825}}},
    {3, "h,UV^2,V", 0.56742223, {3.29460007, 0.44631186, 5.73793993, 3.68805308, {0.38705269, 0.35993853}}},
    {3, "h,VUV,V", 0.56927646, {1.50364426, 0.42866536, 2.92438845, 1.65786749, {0.39764834, 0.39608258}}},
    {3, "h,VUV^-2,V", 0.57125921, {4.05121612, 0.54547945, 5.44226723, 3.71599001, {0.30612825, 0.43194246}}},
  };
  return rows;
}

// The headline configuration of each category (duplicates of ranked rows).
inline const std::vector<TableRow>& headline_rows() {
  static const std::vector<TableRow> rows{ranked_rows()[0], ranked_rows()[10], ranked_rows()[20], ranked_rows()[30]};
  return rows;
}

} // namespace fixtures
