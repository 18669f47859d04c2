// vanetza headers live here
