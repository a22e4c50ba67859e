def execute_command(image):
    image_patch = ImagePatch(image)
    bike_patches = image_patch.find('bike')
    if len(bike_patches) == 0:
        return {'function': 'None', 'error': 'No bike found.'}
    bike = bike_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (bike.horizontal_center, bike.vertical_center), 'box': [bike.left, bike.lower, bike.right, bike.upper]}
