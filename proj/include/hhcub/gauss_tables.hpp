#pragma once

// Gauss-Legendre nodes and weights on [-1, 1], positive half only (n even).
// Generated at 50 digits, rounded to 25 significant digits.

#include <array>

namespace hhcub::gauss {

inline constexpr std::array<double, 4> kNodes8 = {
    0.1834346424956498049394761,
    0.525532409916328985817739,
    0.7966664774136267395915539,
    0.9602898564975362316835609,
};
inline constexpr std::array<double, 4> kWeights8 = {
    0.3626837833783619829651504,
    0.3137066458778872873379622,
    0.222381034453374470544356,
    0.1012285362903762591525314,
};

inline constexpr std::array<double, 8> kNodes16 = {
    0.09501250983763744018531934,
    0.2816035507792589132304605,
    0.4580167776572273863424194,
    0.6178762444026437484466718,
    0.7554044083550030338951012,
    0.8656312023878317438804679,
    0.9445750230732325760779884,
    0.9894009349916499325961542,
};
inline constexpr std::array<double, 8> kWeights16 = {
    0.1894506104550684962853967,
    0.1826034150449235888667637,
    0.1691565193950025381893121,
    0.1495959888165767320815017,
    0.1246289712555338720524763,
    0.09515851168249278480992511,
    0.06225352393864789286284384,
    0.02715245941175409485178057,
};

inline constexpr std::array<double, 16> kNodes32 = {
    0.04830766568773831623481257,
    0.1444719615827964934851864,
    0.2392873622521370745446032,
    0.3318686022821276497799168,
    0.4213512761306353453641194,
    0.5068999089322293900237475,
    0.5877157572407623290407455,
    0.6630442669302152009751152,
    0.7321821187402896803874267,
    0.7944837959679424069630973,
    0.849367613732569970133693,
    0.8963211557660521239653072,
    0.9349060759377396891709191,
    0.9647622555875064307738119,
    0.985611511545268335400175,
    0.9972638618494815635449811,
};
inline constexpr std::array<double, 16> kWeights32 = {
    0.09654008851472780056676483,
    0.095638720079274859419082,
    0.09384439908080456563918024,
    0.09117387869576388471286858,
    0.08765209300440381114277146,
    0.08331192422694675522219907,
    0.07819389578707030647174092,
    0.07234579410884850622539936,
    0.06582222277636184683765006,
    0.05868409347853554714528364,
    0.05099805926237617619616324,
    0.04283589802222668065687865,
    0.03427386291302143310268773,
    0.02539206530926205945575259,
    0.01627439473090567060517056,
    0.007018610009470096600407064,
};

inline constexpr std::array<double, 32> kNodes64 = {
    0.02435029266342443250895584,
    0.07299312178779903944954294,
    0.1214628192961205544703765,
    0.1696444204239928180373136,
    0.2174236437400070841496487,
    0.2646871622087674163739642,
    0.3113228719902109561575127,
    0.3572201583376681159504426,
    0.4022701579639916036957668,
    0.4463660172534640879849477,
    0.4894031457070529574785263,
    0.5312794640198945456580139,
    0.5718956462026340342838781,
    0.611155355172393250248853,
    0.6489654712546573398577612,
    0.6852363130542332425635584,
    0.7198818501716108268489402,
    0.7528199072605318966118638,
    0.7839723589433414076102205,
    0.8132653151227975597419233,
    0.8406292962525803627516915,
    0.8659993981540928197607834,
    0.889315445995114105853404,
    0.9105221370785028057563807,
    0.9295691721319395758214902,
    0.9464113748584028160624815,
    0.9610087996520537189186141,
    0.9733268277899109637418535,
    0.9833362538846259569312993,
    0.9910133714767443207393824,
    0.9963401167719552793469245,
    0.9993050417357721394569056,
};
inline constexpr std::array<double, 32> kWeights64 = {
    0.04869095700913972038336539,
    0.04857546744150342693479907,
    0.04834476223480295716976953,
    0.04799938859645830772812618,
    0.04754016571483030866228221,
    0.04696818281621001732532629,
    0.04628479658131441729595325,
    0.045491627927418144479771,
    0.04459055816375656306013471,
    0.04358372452932345337682786,
    0.04247351512365358900733977,
    0.0412625632426235286101563,
    0.03995374113272034138665693,
    0.0385501531786156291289625,
    0.0370551285402400460404151,
    0.03547221325688238381069315,
    0.03380516183714160939156548,
    0.0320579283548515535854675,
    0.03023465707240247886797406,
    0.02833967261425948322751131,
    0.02637746971505465867169179,
    0.02435270256871087333817755,
    0.02227017380838325415929833,
    0.02013482315353020937234032,
    0.0179517157756973430850453,
    0.015726030476024719321966,
    0.01346304789671864259806077,
    0.01116813946013112881859049,
    0.008846759826363947723030915,
    0.00650445796897836285611736,
    0.004147033260562467635287536,
    0.001783280721696432947296079,
};

}  // namespace hhcub::gauss
