def execute_command(image):
    cone_patches = ImagePatch(image).find('cone')
    cone_patches.sort(key=lambda x: x.horizontal_center)
    middle_cone = cone_patches[len(cone_patches) // 2]
    return {'function': 'navigate_to_object', 'inputs': (middle_cone.horizontal_center, middle_cone.vertical_center), 'box': [middle_cone.left, middle_cone.lower, middle_cone.right, middle_cone.upper]}
