"Routers Package of Coverbord"