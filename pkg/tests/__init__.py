# eisenlat tests
