#pragma once

namespace eegcloak {

// Extended 10-20 unit-sphere positions for the 64 corpus sensors
// (same contents as assets/electrodes_1020.csv).
inline constexpr const char* kBuiltinElectrodeCsv =
    "name,x,y,z\n"
    "FP1,-0.233390461,0.933561844,0.272013193\n"
    "FP2,0.233390461,0.933561844,0.272013193\n"
    "F7,-0.882156659,0.441078329,0.165074336\n"
    "F8,0.882156659,0.441078329,0.165074336\n"
    "AF1,-0.264973189,0.794919568,0.545794915\n"
    "AF2,0.264973189,0.794919568,0.545794915\n"
    "FZ,0.000000000,0.587785252,0.809016994\n"
    "F4,0.548838640,0.548838640,0.630517482\n"
    "F3,-0.548838640,0.548838640,0.630517482\n"
    "FC6,0.794919568,0.264973189,0.545794915\n"
    "FC5,-0.794919568,0.264973189,0.545794915\n"
    "FC2,0.303925368,0.303925368,0.902916796\n"
    "FC1,-0.303925368,0.303925368,0.902916796\n"
    "T8,0.951056516,0.000000000,0.309016994\n"
    "T7,-0.951056516,0.000000000,0.309016994\n"
    "CZ,0.000000000,0.000000000,1.000000000\n"
    "C3,-0.587785252,0.000000000,0.809016994\n"
    "C4,0.587785252,0.000000000,0.809016994\n"
    "CP5,-0.794919568,-0.264973189,0.545794915\n"
    "CP6,0.794919568,-0.264973189,0.545794915\n"
    "CP1,-0.303925368,-0.303925368,0.902916796\n"
    "CP2,0.303925368,-0.303925368,0.902916796\n"
    "P3,-0.548838640,-0.548838640,0.630517482\n"
    "P4,0.548838640,-0.548838640,0.630517482\n"
    "PZ,0.000000000,-0.587785252,0.809016994\n"
    "P8,0.882156659,-0.441078329,0.165074336\n"
    "P7,-0.882156659,-0.441078329,0.165074336\n"
    "PO2,0.264973189,-0.794919568,0.545794915\n"
    "PO1,-0.264973189,-0.794919568,0.545794915\n"
    "O2,0.233390461,-0.933561844,0.272013193\n"
    "O1,-0.233390461,-0.933561844,0.272013193\n"
    "X,-0.928123445,0.337809308,0.156434465\n"
    "AF7,-0.800000000,0.600000000,0.000000000\n"
    "AF8,0.800000000,0.600000000,0.000000000\n"
    "F5,-0.753478311,0.502318874,0.424200640\n"
    "F6,0.753478311,0.502318874,0.424200640\n"
    "FT7,-0.933561844,0.233390461,0.272013193\n"
    "FT8,0.933561844,0.233390461,0.272013193\n"
    "FPZ,0.000000000,0.951056516,0.309016994\n"
    "FC4,0.577901606,0.288950803,0.763241225\n"
    "FC3,-0.577901606,0.288950803,0.763241225\n"
    "C6,0.809016994,0.000000000,0.587785252\n"
    "C5,-0.809016994,0.000000000,0.587785252\n"
    "F2,0.288950803,0.577901606,0.763241225\n"
    "F1,-0.288950803,0.577901606,0.763241225\n"
    "TP8,0.933561844,-0.233390461,0.272013193\n"
    "TP7,-0.933561844,-0.233390461,0.272013193\n"
    "AFZ,0.000000000,0.809016994,0.587785252\n"
    "CP3,-0.577901606,-0.288950803,0.763241225\n"
    "CP4,0.577901606,-0.288950803,0.763241225\n"
    "P5,-0.753478311,-0.502318874,0.424200640\n"
    "P6,0.753478311,-0.502318874,0.424200640\n"
    "C1,-0.309016994,0.000000000,0.951056516\n"
    "C2,0.309016994,0.000000000,0.951056516\n"
    "PO7,-0.800000000,-0.600000000,0.000000000\n"
    "PO8,0.800000000,-0.600000000,0.000000000\n"
    "FCZ,0.000000000,0.309016994,0.951056516\n"
    "POZ,0.000000000,-0.809016994,0.587785252\n"
    "OZ,0.000000000,-0.951056516,0.309016994\n"
    "P2,0.288950803,-0.577901606,0.763241225\n"
    "P1,-0.288950803,-0.577901606,0.763241225\n"
    "CPZ,0.000000000,-0.309016994,0.951056516\n"
    "nd,0.000000000,0.987688341,0.156434465\n"
    "Y,0.928123445,0.337809308,0.156434465\n"
;

}  // namespace eegcloak
