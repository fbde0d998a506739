#include "mburqr/dataio.hpp"
#include "mburqr/errors.hpp"

namespace mburqr {

namespace {

constexpr std::string_view kOecdCsv = R"csv(
country,air,homicide,life_expectancy,life_satisfaction,employment,education,water,safety,support
Australia,6.7,0.9,83,7.1,73,0.84,0.92,0.67,0.93
austria,12.2,0.5,82,7.2,72,0.86,0.92,0.86,0.92
Belgium,12.8,1.1,82.1,6.8,65,0.80,0.79,0.56,0.90
Canada,7.1,1.2,82.1,7,70,0.92,0.90,0.78,0.93
Chile,23.4,2.4,80.6,6.2,56,0.67,0.62,0.41,0.88
Colombia,22.6,23.1,76.7,5.7,58,0.59,0.82,0.50,0.80
Costa rica,17.5,10,80.5,6.3,55,0.43,0.87,0.47,0.82
Czechia,17,0.7,79.3,6.9,74,0.94,0.89,0.77,0.96
Denmark,10,0.5,81.5,7.5,74,0.82,0.93,0.85,0.95
Estonia,5.9,1.9,78.8,6.5,74,0.91,0.86,0.79,0.95
Finland,5.5,1.2,82.1,7.9,72,0.91,0.97,0.88,0.96
France,11.4,0.4,82.9,6.7,65,0.81,0.78,0.74,0.94
Germany,12,0.4,81.4,7.3,77,0.86,0.91,0.76,0.90
Greece,14.5,1,81.7,5.8,56,0.76,0.67,0.69,0.78
Hungary,16.7,0.9,76.4,6,70,0.86,0.81,0.74,0.94
Iceland,6.4,0.3,83.2,7.6,78,0.76,0.97,0.85,0.98
Ireland,7.8,0.5,82.8,7,68,0.85,0.80,0.76,0.96
Isreal,19.7,1.5,82.9,7.2,67,0.88,0.77,0.80,0.95
Italy,15.9,0.5,83.6,6.5,58,0.63,0.77,0.73,0.89
Japan,13.7,0.2,84.4,6.1,77,,0.87,0.77,0.89
Korea,27.3,0.8,83.3,5.8,66,0.89,0.82,0.82,0.80
Latvia,12.7,3.7,75.5,6.2,72,0.89,0.83,0.72,0.92
Lithuania,10.5,2.5,76.4,6.4,72,0.94,0.83,0.62,0.89
Luxembourg,10,0.2,82.7,7.4,67,0.74,0.85,0.87,0.91
Mexico,20.3,26.8,75.1,6,59,0.42,0.75,0.42,0.77
Netherlands,12.2,0.6,82.2,7.5,78,0.81,0.91,0.83,0.94
New Zealand,6,1.3,82.1,7.3,77,0.81,0.85,0.66,0.95
Norway,6.7,0.6,83,7.3,75,0.82,0.98,0.93,0.96
Poland,22.8,0.5,78,6.1,69,0.93,0.82,0.71,0.94
Portugal,8.3,0.7,81.8,5.8,69,0.55,0.89,0.83,0.87
Slovak Republic,18.5,0.8,77.8,6.5,68,0.92,0.81,0.76,0.95
Slovenia,17,0.4,81.6,6.5,71,0.90,0.93,0.91,0.95
Spain,10,0.7,83.9,6.5,62,0.63,0.76,0.80,0.93
Sweden,5.8,1.1,83.2,7.3,75,0.84,0.97,0.79,0.94
Switzerland,10.1,0.3,84,7.5,80,0.89,0.96,0.86,0.94
Turkiye,27.1,1,78.6,4.9,48,0.42,0.62,0.59,0.85
United Kingdom,10.1,0.2,81.3,6.8,75,0.82,0.82,0.78,0.93
United States,7.7,6,78.9,7,67,0.92,0.88,0.78,0.94
Brazil,11.7,19,75.9,6.1,57,0.57,0.70,0.45,0.83
Russia,11.8,4.8,73.2,5.5,70,0.95,0.62,0.64,0.89
South africa,28.5,13.7,64.2,4.9,39,0.48,0.72,0.40,0.89
)csv";

}  // namespace

const std::uint64_t kOecdFixtureChecksum = 0xfe550caa5f0889fdULL;

std::string_view oecd_fixture_csv() { return kOecdCsv.substr(1); }

const DataTable& oecd_fixture() {
    static const DataTable table = [] {
        const std::string_view text = oecd_fixture_csv();
        if (fnv1a64(text) != kOecdFixtureChecksum) throw DataError("embedded OECD fixture failed its checksum");
        return load_csv_string(text);
    }();
    return table;
}

}  // namespace mburqr
