#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>

#include "dfd/errors.hpp"

namespace dfd {

// Calendar date stored as days since 1970-01-01. Arithmetic is plain day
// arithmetic; month handling goes through std::chrono's civil calendar.
class Date {
public:
    Date() = default;
    explicit Date(int days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day) {
        using namespace std::chrono;
        year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
        if (!ymd.ok()) {
            throw ValidationError("invalid calendar date: " + std::to_string(year) + "-" +
                                  std::to_string(month) + "-" + std::to_string(day));
        }
        return Date(static_cast<int>(sys_days(ymd).time_since_epoch().count()));
    }

    // Accepts strict ISO-8601 dates, e.g. "2003-01-31".
    static Date parse(const std::string& text) {
        int y = 0;
        unsigned m = 0, d = 0;
        char tail = '\0';
        if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3) {
            throw ValidationError("unparseable ISO date: '" + text + "'");
        }
        return from_ymd(y, m, d);
    }

    int days() const { return days_; }

    std::string iso() const {
        using namespace std::chrono;
        year_month_day ymd{sys_days{std::chrono::days{days_}}};
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }

    int year() const {
        using namespace std::chrono;
        return static_cast<int>(year_month_day{sys_days{std::chrono::days{days_}}}.year());
    }
    unsigned month() const {
        using namespace std::chrono;
        return static_cast<unsigned>(year_month_day{sys_days{std::chrono::days{days_}}}.month());
    }
    unsigned day() const {
        using namespace std::chrono;
        return static_cast<unsigned>(year_month_day{sys_days{std::chrono::days{days_}}}.day());
    }

    // 0 = Monday ... 6 = Sunday.
    int weekday() const {
        int w = (days_ + 3) % 7;
        return w < 0 ? w + 7 : w;
    }

    int day_of_year() const { return days_ - from_ymd(year(), 1, 1).days_ + 1; }

    Date first_of_month() const { return from_ymd(year(), month(), 1); }

    Date first_of_next_month() const {
        int y = year();
        unsigned m = month();
        return m == 12 ? from_ymd(y + 1, 1, 1) : from_ymd(y, m + 1, 1);
    }

    Date last_of_month() const { return first_of_next_month() + (-1); }

    Date operator+(int d) const { return Date(days_ + d); }
    Date operator-(int d) const { return Date(days_ - d); }
    int operator-(const Date& o) const { return days_ - o.days_; }
    Date& operator++() {
        ++days_;
        return *this;
    }
    auto operator<=>(const Date&) const = default;

private:
    int days_ = 0;
};

}  // namespace dfd
